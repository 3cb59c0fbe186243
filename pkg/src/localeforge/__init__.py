"""Finite frames, locales, nuclei and the subobject functor on finite sets."""

from .config import Config
from .coproduct import FrameCoproduct, check_hausdorff, coproduct, verify_universal_property
from .errors import (
    CapExceeded,
    CharacterizationMismatch,
    ImplementationBug,
    InputError,
    LocaleForgeError,
    NotAdjoint,
    NotALattice,
    NotANucleus,
    NotDistributive,
    NotEquivalenceRelation,
    NotFrameHom,
    NotLatticeHom,
    SizeOverflow,
    SubfitFormsDisagree,
)
from .frame import (
    BoolAlg,
    Frame,
    boolean,
    boolean_center,
    chain,
    check_compact,
    check_normal,
    check_regular,
    check_subfit,
    enumerate_distributive_lattices,
    find_isomorphism,
    ideal_map,
    ideals,
    phi,
)
from .maps import (
    FrameHom,
    LocalicMap,
    is_closed,
    is_dense,
    is_injection,
    is_proper,
    is_surjection,
    nucleus_image,
    nucleus_preimage,
    right_adjoint,
)
from .nuclei import (
    Nucleus,
    all_nuclei,
    closed_nucleus,
    generate_NX,
    nucleus_join,
    nucleus_meet,
    open_nucleus,
)
from .poset import Poset, all_downsets, join_irreducibles, product
from .verdict import Verdict

__version__ = "0.1.0"
