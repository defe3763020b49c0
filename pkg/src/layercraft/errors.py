class LayercraftError(Exception):
    """Base class for all library errors."""


class PosetError(LayercraftError):
    pass


class MultipleMinima(PosetError):
    def __init__(self, minima):
        self.minima = list(minima)
        super().__init__(f"poset has {len(self.minima)} minimal elements: {self.minima}")


class NotRanked(PosetError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"maximal chains below {element!r} have different lengths")


class CycleDetected(PosetError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"cover relation has a cycle through {element!r}")


class AtomNotFound(PosetError):
    def __init__(self, element):
        self.element = element
        super().__init__(f"{element!r} is not an atom")


class NotALattice(LayercraftError):
    pass


class NotLocallyGeometric(LayercraftError):
    pass


class NotMonic(LayercraftError):
    pass


class InternalInconsistency(LayercraftError):
    """A proven implication was violated: this indicates a bug."""


class BudgetExceeded(LayercraftError):
    def __init__(self, count, what="poset elements"):
        self.count = count
        super().__init__(f"budget exceeded: more than {count} {what}")


class ZeroCharacter(LayercraftError):
    pass


class LayerNotFound(LayercraftError):
    pass


class UnsupportedType(LayercraftError):
    pass


class NotAPositiveRoot(LayercraftError):
    pass


class InvalidExtensionParameter(LayercraftError):
    pass


class NotCovered(LayercraftError):
    def __init__(self, reason):
        self.reason = reason
        super().__init__(reason)


class ParseError(LayercraftError):
    def __init__(self, message, position):
        self.position = position
        super().__init__(f"{message} at offset {position}")


class DivisibilityFailed(LayercraftError):
    def __init__(self, step, reason=""):
        self.step = step
        self.reason = reason
        super().__init__(f"induction step {step} failed" + (f": {reason}" if reason else ""))
