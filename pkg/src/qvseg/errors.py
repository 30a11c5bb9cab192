class QVSegError(Exception):
    """Base class for all errors raised by qvseg."""


class InvalidArgument(QVSegError, ValueError):
    pass


class InvalidGate(InvalidArgument):
    pass


class Unsupported(QVSegError):
    pass


class CorruptState(QVSegError):
    """Decoded state disagrees with itself; points at a pipeline bug."""


class IncompleteSampling(QVSegError):
    def __init__(self, missing):
        self.missing = sorted(missing)
        preview = ", ".join(str(c) for c in self.missing[:8])
        more = "" if len(self.missing) <= 8 else f" (+{len(self.missing) - 8} more)"
        super().__init__(f"{len(self.missing)} cells never observed: {preview}{more}")
