"""Exception types shared across the package."""


class InvalidArgumentError(ValueError):
    """A parameter is outside its allowed domain."""


class CapacityError(InvalidArgumentError):
    """Requested register size exceeds what the dense simulator supports."""


class BitstringParseError(InvalidArgumentError):
    """Illegal byte in a bitstring file."""

    def __init__(self, offset: int, byte: int):
        self.offset = offset
        self.byte = byte
        super().__init__(f"illegal byte {byte!r} at offset {offset}")


class EmptyInputError(InvalidArgumentError):
    """Bitstring input contained no '0'/'1' characters."""
