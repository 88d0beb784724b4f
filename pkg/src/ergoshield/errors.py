"""Exception types shared across the package."""


class ErgoshieldError(Exception):
    """Base class for all package errors."""


class ShapeError(ErgoshieldError, ValueError):
    """Operand dimensions are incompatible."""


class DomainError(ErgoshieldError, ValueError):
    """A parameter lies outside its mathematical domain."""


class HermiticityError(ErgoshieldError, ValueError):
    """Input expected Hermitian deviates beyond tolerance.

    Carries the measured max-entry deviation in ``deviation``.
    """

    def __init__(self, deviation: float, tol: float):
        self.deviation = float(deviation)
        self.tol = float(tol)
        super().__init__(
            f"matrix is not Hermitian: max deviation {deviation:.3e} exceeds {tol:.1e}"
        )


class GridError(ErgoshieldError, ValueError):
    """A time grid violates the uniform/odd-length requirements."""


class ConfigError(ErgoshieldError, ValueError):
    """A configuration key is missing, unknown or inconsistent.

    ``key`` names the offending configuration entry.
    """

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class NumericalFailure(ErgoshieldError, RuntimeError):
    """An integration run breached a state-validity tolerance.

    Carries the step index, the name of the violated invariant and, for
    ensemble runs, the index of the offending trajectory.
    """

    def __init__(self, step: int, invariant: str, value: float, tol: float,
                 path_index: int | None = None, context: str = ""):
        self.step = int(step)
        self.invariant = invariant
        self.value = float(value)
        self.tol = float(tol)
        self.path_index = path_index
        where = f" (path {path_index})" if path_index is not None else ""
        ctx = f" in {context}" if context else ""
        super().__init__(
            f"step {step}: {invariant} violated{where}{ctx} "
            f"({value:.3e} vs tol {tol:.1e})"
        )


class DegenerateLandscapeWarning(UserWarning):
    """Objective values indistinguishable across the whole search window."""
