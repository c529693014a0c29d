"""Exception types shared across the solver."""


class AdhypError(Exception):
    """Base class for all solver errors."""


class InvalidStateError(AdhypError):
    """A conserved or primitive state violates positivity (rho > 0, p > 0)."""

    def __init__(self, message, cell=None, state=None):
        if cell is not None:
            message = f"{message} (cell {cell})"
        if state is not None:
            message = f"{message}: {state}"
        super().__init__(message)
        self.cell = cell
        self.state = state


class DecompositionError(AdhypError):
    """The characteristic decomposition cannot be built at this state."""


class SolverAbort(AdhypError):
    """A time step produced an unusable state; carries diagnostics."""

    def __init__(self, message, t=None, step=None, stage=None, cell=None, state=None):
        parts = [message]
        if t is not None:
            parts.append(f"t={t!r}")
        if step is not None:
            parts.append(f"step={step}")
        if stage is not None:
            parts.append(f"stage={stage}")
        if cell is not None:
            parts.append(f"cell={cell}")
        if state is not None:
            parts.append(f"state={state}")
        super().__init__(" ".join(str(p) for p in parts))
        self.t = t
        self.step = step
        self.stage = stage
        self.cell = cell
        self.state = state


class MeshCompatibilityError(AdhypError):
    """Two fields live on meshes that cannot be compared."""


class FieldFileError(AdhypError):
    """A field file failed to parse; message names the offending line."""


class CatalogError(AdhypError):
    """Unknown benchmark problem id."""
