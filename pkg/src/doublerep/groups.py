"""Finite groups as multiplication tables, with conjugacy structure,
centralizers, and normal-subgroup enumeration.

Elements are dense indices ``0..n-1`` with the identity at index 0; every
higher layer refers to elements by index only.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

from .errors import GroupSpecError, SizeLimitError, ValidationError

DEFAULT_MAX_ORDER = 5040

# Exhaustive associativity is O(n^3); above this order we trust the
# construction path (closure / product tables are associative by build).
_ASSOC_CHECK_LIMIT = 256


class GroupTable:
    """A finite group given by its multiplication table.

    ``mult[a][b]`` is the index of the product ab, ``inv[a]`` the index of
    the inverse.  Instances are immutable after construction; derived data
    (conjugacy classes, orders) is cached lazily.
    """

    __slots__ = ("order", "mult", "inv", "identity", "label", "_cache")

    def __init__(self, mult, label="", check=True):
        mult = tuple(tuple(int(x) for x in row) for row in mult)
        n = len(mult)
        if n == 0:
            raise ValidationError("empty multiplication table")
        self.order = n
        self.mult = mult
        self.identity = 0
        self.label = label
        self._cache = {}

        inv = [-1] * n
        for a in range(n):
            for b in range(n):
                if mult[a][b] == 0:
                    inv[a] = b
                    break
        self.inv = tuple(inv)
        if check:
            self._validate()

    def _validate(self):
        n, mult = self.order, self.mult
        full = set(range(n))
        for a in range(n):
            if len(mult[a]) != n:
                raise ValidationError("multiplication table is not square")
            if set(mult[a]) != full:
                raise ValidationError(f"row {a} is not a permutation")
            if {mult[b][a] for b in range(n)} != full:
                raise ValidationError(f"column {a} is not a permutation")
        for x in range(n):
            if mult[0][x] != x or mult[x][0] != x:
                raise ValidationError("index 0 is not a two-sided identity")
        for a in range(n):
            if self.inv[a] < 0 or mult[a][self.inv[a]] != 0 or mult[self.inv[a]][a] != 0:
                raise ValidationError(f"element {a} has no two-sided inverse")
        if n <= _ASSOC_CHECK_LIMIT:
            for a in range(n):
                ma = mult[a]
                for b in range(n):
                    mab = mult[ma[b]]
                    mb = mult[b]
                    for c in range(n):
                        if mab[c] != ma[mb[c]]:
                            raise ValidationError(
                                f"associativity fails at ({a},{b},{c})")

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def conj(self, h: int, x: int) -> int:
        """h x h^-1."""
        return self.mult[self.mult[h][x]][self.inv[h]]

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inv[a], -k
        r = 0
        for _ in range(k):
            r = self.mult[r][a]
        return r

    def element_order(self, a: int) -> int:
        r, k = a, 1
        while r != 0:
            r = self.mult[r][a]
            k += 1
        return k

    def exponent(self) -> int:
        if "exponent" not in self._cache:
            e = 1
            for a in range(self.order):
                e = math.lcm(e, self.element_order(a))
            self._cache["exponent"] = e
        return self._cache["exponent"]

    def is_abelian(self) -> bool:
        if "abelian" not in self._cache:
            m = self.mult
            self._cache["abelian"] = all(
                m[a][b] == m[b][a]
                for a in range(self.order) for b in range(a + 1, self.order))
        return self._cache["abelian"]

    def commutes(self, a: int, b: int) -> bool:
        return self.mult[a][b] == self.mult[b][a]

    def content_key(self) -> bytes:
        """Byte string identifying the table (label excluded)."""
        n = self.order
        parts = [n.to_bytes(4, "big")]
        width = max(1, (n.bit_length() + 7) // 8)
        for row in self.mult:
            for x in row:
                parts.append(x.to_bytes(width, "big"))
        return b"".join(parts)

    def __eq__(self, other):
        return isinstance(other, GroupTable) and self.mult == other.mult

    def __hash__(self):
        return hash(self.mult)

    def __repr__(self):
        return f"GroupTable({self.label or 'order %d' % self.order!r})"


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of a parent table, as a sorted tuple of element indices."""

    parent: GroupTable
    elements: tuple
    is_normal: bool = False

    def __post_init__(self):
        g = self.parent
        elems = tuple(sorted(set(int(x) for x in self.elements)))
        object.__setattr__(self, "elements", elems)
        es = set(elems)
        if 0 not in es:
            raise ValidationError("subgroup misses the identity")
        for a in elems:
            if g.inv[a] not in es:
                raise ValidationError(f"subgroup not closed under inverse ({a})")
            for b in elems:
                if g.mult[a][b] not in es:
                    raise ValidationError(
                        f"subgroup not closed under product ({a},{b})")
        if self.is_normal:
            for h in range(g.order):
                if any(g.conj(h, x) not in es for x in elems):
                    raise ValidationError("subgroup is not normal as claimed")

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self.elements

    def table(self) -> tuple[GroupTable, dict]:
        """The subgroup as a group in its own right.

        Returns ``(table, to_sub)`` where ``to_sub`` maps parent element
        indices to subgroup indices.  The identity keeps index 0 because
        elements are sorted and 0 is minimal.
        """
        key = ("subtable", self.elements)
        cache = self.parent._cache
        if key not in cache:
            elems = self.elements
            to_sub = {e: i for i, e in enumerate(elems)}
            mult = [[to_sub[self.parent.mult[a][b]] for b in elems] for a in elems]
            label = f"{self.parent.label}|sub{len(elems)}"
            cache[key] = (GroupTable(mult, label=label, check=False), to_sub)
        return cache[key]


@dataclass(frozen=True)
class ConjugacyData:
    """Conjugacy classes with canonical minimal-index representatives."""

    group: GroupTable
    classes: tuple          # tuple of tuples of element indices, sorted
    class_of: tuple         # element index -> class index
    reps: tuple             # class index -> minimal element of the class
    centralizers: tuple     # class index -> Subgroup (centralizer of rep)
    conjugators: tuple = field(repr=False, default=())
    # conjugators[c][b] = k with  k * rep_c * k^-1 = b,  one per class member,
    # found breadth-first from the representative (deterministic choice).

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def class_sizes(self) -> tuple:
        return tuple(len(c) for c in self.classes)


def conjugacy_classes(g: GroupTable) -> ConjugacyData:
    """Conjugacy classes, centralizers and deterministic conjugator tables."""
    if "conjugacy" in g._cache:
        return g._cache["conjugacy"]
    n = g.order
    class_of = [-1] * n
    classes = []
    conjugators = []
    for r in range(n):
        if class_of[r] >= 0:
            continue
        idx = len(classes)
        # breadth-first conjugation sweep from the minimal representative
        k_of = {r: 0}
        queue = [r]
        class_of[r] = idx
        while queue:
            b = queue.pop(0)
            for h in range(n):
                b2 = g.conj(h, b)
                if b2 not in k_of:
                    k_of[b2] = g.mult[h][k_of[b]]
                    class_of[b2] = idx
                    queue.append(b2)
        members = tuple(sorted(k_of))
        classes.append(members)
        conjugators.append({b: k_of[b] for b in members})
    reps = tuple(c[0] for c in classes)
    cents = []
    for i, r in enumerate(reps):
        elems = tuple(h for h in range(n) if g.commutes(h, r))
        cents.append(Subgroup(g, elems))
        if len(classes[i]) * len(elems) != n:
            raise ValidationError("|class| * |centralizer| != |G|")
    data = ConjugacyData(g, tuple(classes), tuple(class_of), reps,
                         tuple(cents), tuple(conjugators))
    g._cache["conjugacy"] = data
    return data


def generated_subgroup(g: GroupTable, gens) -> tuple:
    """Closure of ``gens`` (with identity) under multiplication, sorted."""
    seen = {0}
    queue = [0]
    gens = [int(x) for x in gens]
    while queue:
        a = queue.pop()
        for s in gens:
            for b in (g.mult[a][s], g.mult[s][a]):
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
    return tuple(sorted(seen))


def normal_subgroups(g: GroupTable) -> list:
    """All normal subgroups, sorted by (order, elements).

    Normal subgroups are unions of conjugacy classes; every one is a join
    of normal closures of single classes, so we saturate that set under
    pairwise joins.
    """
    if g.order > DEFAULT_MAX_ORDER:
        raise SizeLimitError(f"order {g.order} exceeds cap {DEFAULT_MAX_ORDER}")
    conj = conjugacy_classes(g)
    found = {(0,)}
    for cls in conj.classes:
        found.add(generated_subgroup(g, cls))
    while True:
        new = set()
        for a, b in itertools.combinations(sorted(found), 2):
            j = generated_subgroup(g, set(a) | set(b))
            if j not in found:
                new.add(j)
        if not new:
            break
        found |= new
    out = [Subgroup(g, elems, is_normal=True)
           for elems in sorted(found, key=lambda e: (len(e), e))]
    return out


# ---------------------------------------------------------------------------
# constructors

def _perm_compose(p, q):
    # (p . q)(x) = p(q(x))
    return tuple(p[q[x]] for x in range(len(p)))


def group_from_generators(n: int, gens, label: str = "",
                          max_order: int = DEFAULT_MAX_ORDER) -> GroupTable:
    """Group generated by permutations of ``0..n-1``.

    Elements are ordered by first appearance in a breadth-first closure
    starting from the identity, so the identity gets index 0.
    """
    idperm = tuple(range(n))
    gens = [tuple(int(x) for x in p) for p in gens]
    for p in gens:
        if sorted(p) != list(range(n)):
            raise ValidationError(f"generator {p} is not a permutation of 0..{n - 1}")
    elems = [idperm]
    index = {idperm: 0}
    head = 0
    while head < len(elems):
        cur = elems[head]
        head += 1
        for p in gens:
            nxt = _perm_compose(cur, p)
            if nxt not in index:
                if len(elems) >= max_order:
                    raise SizeLimitError(
                        f"generated group exceeds order cap {max_order}")
                index[nxt] = len(elems)
                elems.append(nxt)
    order = len(elems)
    mult = [[index[_perm_compose(a, b)] for b in elems] for a in elems]
    return GroupTable(mult, label=label or f"gen{order}")


def product_table(a: GroupTable, b: GroupTable, label="") -> GroupTable:
    """Direct product with left-major element encoding (a, b) -> a*|B| + b."""
    nb = b.order
    n = a.order * nb
    mult = [[0] * n for _ in range(n)]
    for a1 in range(a.order):
        for b1 in range(nb):
            i = a1 * nb + b1
            for a2 in range(a.order):
                ma = a.mult[a1][a2]
                for b2 in range(nb):
                    mult[i][a2 * nb + b2] = ma * nb + b.mult[b1][b2]
    return GroupTable(mult, label=label, check=False)


def _cyclic(n):
    return GroupTable([[(i + j) % n for j in range(n)] for i in range(n)],
                      check=False)


def _dihedral(n):
    # element (f, i) = s^f r^i with index f*n + i; r^n = s^2 = 1, s r s = r^-1,
    # so  s^f1 r^i1 * s^f2 r^i2 = s^(f1+f2) r^(i2 - i1)  when f2 = 1,
    # and r^(i1 + i2) when f2 = 0.
    order = 2 * n
    mult = [[0] * order for _ in range(order)]
    for x in range(order):
        f1, i1 = divmod(x, n)
        for y in range(order):
            f2, i2 = divmod(y, n)
            i = (i2 - i1) % n if f2 else (i1 + i2) % n
            mult[x][y] = ((f1 + f2) % 2) * n + i
    return GroupTable(mult)


def _symmetric(n, even_only=False):
    perms = [p for p in itertools.permutations(range(n))]
    if even_only:
        def parity(p):
            inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
            return inv % 2
        perms = [p for p in perms if parity(p) == 0]
    perms.sort()  # identity is lexicographically first
    index = {p: i for i, p in enumerate(perms)}
    mult = [[index[_perm_compose(a, b)] for b in perms] for a in perms]
    return GroupTable(mult, check=False)


_Q8_BASIS = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]


def _quaternion8():
    # unit quaternion table over the basis 1, -1, i, -i, j, -j, k, -k
    prod = {
        ("1", "1"): "1", ("i", "i"): "-1", ("j", "j"): "-1", ("k", "k"): "-1",
        ("i", "j"): "k", ("j", "k"): "i", ("k", "i"): "j",
        ("j", "i"): "-k", ("k", "j"): "-i", ("i", "k"): "-j",
    }

    def split(s):
        return (-1, s[1:]) if s.startswith("-") else (1, s)

    def mul(x, y):
        sx, bx = split(x)
        sy, by = split(y)
        if bx == "1":
            base, sign = by, 1
        elif by == "1":
            base, sign = bx, 1
        else:
            r = prod[(bx, by)]
            sign, base = split(r)
        total = sx * sy * sign
        return base if total == 1 else "-" + base

    index = {s: i for i, s in enumerate(_Q8_BASIS)}
    mult = [[index[mul(x, y)] for y in _Q8_BASIS] for x in _Q8_BASIS]
    return GroupTable(mult)


def named_group(spec: str, max_order: int = DEFAULT_MAX_ORDER) -> GroupTable:
    """Build a group from a spec string.

    Grammar: ``Z:n``, ``D:n`` (dihedral of order 2n), ``S:n``, ``A:n``,
    ``Q8``, and products ``X*Y``.
    """
    spec = spec.strip()
    if not spec:
        raise GroupSpecError("empty group spec")
    parts = [p.strip() for p in spec.split("*")]
    tables = [_named_atom(p) for p in parts]
    g = tables[0]
    for t in tables[1:]:
        g = product_table(g, t)
    if g.order > max_order:
        raise SizeLimitError(
            f"group {spec!r} has order {g.order} > cap {max_order}")
    g.label = spec
    return g


def _named_atom(spec: str) -> GroupTable:
    if spec == "Q8":
        return _quaternion8()
    if ":" not in spec:
        raise GroupSpecError(
            f"cannot parse group spec {spec!r} (expected Z:n, D:n, S:n, A:n or Q8)")
    fam, _, num = spec.partition(":")
    try:
        n = int(num)
    except ValueError:
        raise GroupSpecError(f"bad order {num!r} in group spec {spec!r}") from None
    if n < 1:
        raise GroupSpecError(f"order must be positive in {spec!r}")
    if fam == "Z":
        return _cyclic(n)
    if fam == "D":
        return _dihedral(n)
    if fam == "S":
        if math.factorial(n) > DEFAULT_MAX_ORDER:
            raise SizeLimitError(f"S:{n} exceeds the size cap")
        return _symmetric(n)
    if fam == "A":
        if math.factorial(n) // 2 > DEFAULT_MAX_ORDER and n > 2:
            raise SizeLimitError(f"A:{n} exceeds the size cap")
        return _symmetric(n, even_only=True) if n > 2 else _cyclic(1)
    raise GroupSpecError(f"unknown group family {fam!r} in {spec!r}")


def read_generator_file(path) -> tuple[int, list]:
    """Parse a permutation-generator file: first line n, then one
    space-separated image list per line."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines:
        raise GroupSpecError(f"{path}: empty generator file")
    try:
        n = int(lines[0])
    except ValueError:
        raise GroupSpecError(f"{path}: first line must be the domain size") from None
    gens = []
    for ln in lines[1:]:
        try:
            p = tuple(int(tok) for tok in ln.split())
        except ValueError:
            raise GroupSpecError(f"{path}: bad generator line {ln!r}") from None
        if len(p) != n:
            raise GroupSpecError(f"{path}: generator {ln!r} has wrong length")
        gens.append(p)
    return n, gens
