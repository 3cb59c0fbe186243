"""Exception hierarchy.

Input problems derive from :class:`InputError` (the CLI maps them to exit
code 2). :class:`ImplementationBug` marks disagreements between two
characterizations that are equivalent in theory; seeing one means the code
is wrong, not the input.
"""


class LocaleForgeError(Exception):
    pass


class InputError(LocaleForgeError, ValueError):
    pass


class InvalidPoset(InputError):
    pass


class NotALattice(InputError):
    pass


class NotDistributive(InputError):
    pass


class NotLatticeHom(InputError):
    pass


class NotFrameHom(InputError):
    pass


class NotANucleus(InputError):
    pass


class NotEquivalenceRelation(InputError):
    pass


class NotAdjoint(LocaleForgeError):
    pass


class SizeOverflow(InputError):
    """A configured size cap was exceeded; ``cap_name`` names which one."""

    def __init__(self, cap_name: str, cap: int, message: str = ""):
        self.cap_name = cap_name
        self.cap = cap
        super().__init__(message or f"{cap_name} exceeded (cap = {cap})")


class CapExceeded(SizeOverflow):
    pass


class ImplementationBug(LocaleForgeError):
    pass


class SubfitFormsDisagree(ImplementationBug):
    pass


class CharacterizationMismatch(ImplementationBug):
    pass


class NoMediator(ImplementationBug):
    pass


class MultipleMediators(ImplementationBug):
    pass
