"""doublerep: the representation category of the Drinfeld double of a
finite group, computed by exact finite linear algebra.

Layers:

* :mod:`doublerep.groups` - multiplication tables, conjugacy, subgroups
* :mod:`doublerep.characters` - exact character tables (finite-field lift)
* :mod:`doublerep.double` - simples, characters and fusion of the double
* :mod:`doublerep.modular` - S/T matrices, Verlinde, modularity criterion
* :mod:`doublerep.untwisted` - the function algebra A, the invariants
  functor on group representations, and the multiplicative structure J
* :mod:`doublerep.orbifold` - twisted sectors, sector multiplication, the
  big sector algebra and its symmetries
* :mod:`doublerep.verify` - one-shot verification suites
* :mod:`doublerep.cli` - command line front end
"""

from .groups import (
    GroupTable,
    Subgroup,
    ConjugacyData,
    conjugacy_classes,
    group_from_generators,
    named_group,
    normal_subgroups,
)
from .characters import (
    CharacterTable,
    ClassFunction,
    character_table,
    decompose,
    inner_product,
    restrict,
    vanishing_virtual_character,
)

__version__ = "0.1.0"
