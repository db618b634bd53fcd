"""
Exception types raised by the simulator.
"""


class BlendFlowError(Exception):
    """Base class for every error the library raises."""


class DomainError(BlendFlowError):
    """A density or parameter lies outside the admissible range of a law."""


class RangeError(BlendFlowError):
    """A Riemann coordinate lies outside the range of R̃."""


class QuadratureError(BlendFlowError):
    """Adaptive quadrature could not reach the requested tolerance."""


class ConfigError(BlendFlowError):
    """A scenario or parameter set is malformed."""


class SonicError(BlendFlowError):
    """A stationary profile reached p′(ρ) ≤ v²."""


class NonconvergenceError(BlendFlowError):
    """An ODE integration or shooting iteration failed."""


class SolverError(BlendFlowError):
    """
    Failure inside a time step. Carries the time and cell where it happened.
    """

    def __init__(self, message, t=None, cell=None):
        self.t = t
        self.cell = cell
        where = []
        if t is not None:
            where.append(f"t={t:.10g}")
        if cell is not None:
            where.append(f"cell={cell}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)


class DegenerateError(SolverError):
    """The maximal characteristic speed is zero."""


class VacuumError(SolverError):
    """A reconstructed density fell to or below the density floor."""


class CFLError(SolverError):
    """The requested time step exceeds the CFL bound."""


class BoundaryError(SolverError):
    """A characteristic points the wrong way for an imposed boundary condition."""


class TableRangeError(SolverError):
    """A density left the interval covered by a tabulated pressure law."""
