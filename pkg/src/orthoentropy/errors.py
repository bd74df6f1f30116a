"""Exception types raised by orthoentropy."""


class OrthoEntropyError(ValueError):
    """Base class for all input/contract violations."""


class NotHermitian(OrthoEntropyError):
    pass


class NotUnitary(OrthoEntropyError):
    pass


class NegativeEigenvalue(OrthoEntropyError):
    pass


class ShapeMismatch(OrthoEntropyError):
    pass


class PartitionDefect(OrthoEntropyError):
    pass


class UnsupportedAlgebra(OrthoEntropyError):
    pass
