"""Exception types shared across the package."""


class WaveManifoldError(Exception):
    pass


class EllipticState(WaveManifoldError):
    pass


class DegenerateRoot(WaveManifoldError):
    def __init__(self, msg, finite_root=None):
        super().__init__(msg)
        self.finite_root = finite_root


class StartOnBoundary(WaveManifoldError):
    pass


class ZAxisSingular(WaveManifoldError):
    pass


class DoubleSonicDegenerate(WaveManifoldError):
    pass


class SingularPoint(WaveManifoldError):
    pass


class OnBoundary(WaveManifoldError):
    pass


class NotInCs(WaveManifoldError):
    pass


class EmptyRange(WaveManifoldError):
    pass


class BasePointOnBoundary(WaveManifoldError):
    pass


class OutOfRange(WaveManifoldError):
    pass


class NoIntersection(WaveManifoldError):
    pass


class WaveLeftDomain(WaveManifoldError):
    pass


class EllipticCellEncountered(WaveManifoldError):
    def __init__(self, msg, cells=None):
        super().__init__(msg)
        self.cells = cells if cells is not None else []
