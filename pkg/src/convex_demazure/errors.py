"""Exception types shared across the package."""


class DemazureError(Exception):
    pass


class NonZeroDiagonal(DemazureError, ValueError):
    pass


class ShapeMismatch(DemazureError, ValueError):
    pass


class DimensionMismatch(DemazureError, ValueError):
    pass


class IndexOutOfRange(DemazureError, IndexError):
    pass


class SpaceMismatch(DemazureError, ValueError):
    pass


class NotAParapolytope(DemazureError):
    def __init__(self, block, base):
        self.block = block
        self.base = base
        super().__init__(f"fiber over {base} in block {block} is not a full lattice box")


class InconsistentHint(DemazureError):
    pass


class NotDegenerate(DemazureError, ValueError):
    pass


class OperatorUndefined(DemazureError):
    def __init__(self, block, piece=None, message=None):
        self.block = block
        self.piece = piece
        super().__init__(message or f"D_{block} is undefined: piece has no degenerate direction in block {block}")


class WordError(DemazureError):
    """Failure while applying an operator word; carries the failing token index."""

    def __init__(self, token_index, token, cause):
        self.token_index = token_index
        self.token = token
        self.cause = cause
        super().__init__(f"token #{token_index} ({token}): {cause}")


class CosetNotStable(DemazureError, ValueError):
    pass


class NotDominant(DemazureError, ValueError):
    pass


class NotFiniteType(DemazureError, ValueError):
    pass


class NotNonIncreasing(DemazureError, ValueError):
    pass


class EmptyWord(DemazureError, ValueError):
    pass


class BlockTooSmall(DemazureError, ValueError):
    pass


class MultiplicityMismatch(DemazureError, ValueError):
    pass


class DimensionUnsupported(DemazureError, ValueError):
    pass
