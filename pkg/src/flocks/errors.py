"""Exception hierarchy shared by every module of the package."""


class FlocksError(Exception):
    """Base class for all errors raised by :mod:`flocks`."""


class FormulaSyntaxError(FlocksError, ValueError):
    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}")


class SignatureTooLarge(FlocksError):
    pass


class TautologyContraction(FlocksError):
    pass


class OccursInFlock(FlocksError):
    pass


class NotDisjoint(FlocksError):
    def __init__(self, shared):
        self.shared = tuple(shared)
        names = ", ".join(self.shared)
        super().__init__(f"flocks share formulas: {names}")


class EmptyFlock(FlocksError):
    pass


class TooLarge(FlocksError):
    pass


class FlockSyntaxError(FlocksError, ValueError):
    pass
