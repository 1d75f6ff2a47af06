"""Simple objects, characters, fusion rules, and explicit modules of the
representation category of the Drinfeld double of a finite group.

A simple object is an orbit of pairs (g, pi): a conjugacy class
representative g and an irreducible character pi of its centralizer; its
dimension is |class(g)| * deg(pi).  Everything on the main path (fusion,
decomposition, modular data) is computed from characters on commuting
pairs; explicit matrix modules appear only as construction/validation
devices and in the monomial (deg pi = 1) oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .characters import CharacterTable, character_table
from .errors import (
    ConsistencyError,
    GroupMismatchError,
    ValidationError,
)
from .groups import ConjugacyData, GroupTable, conjugacy_classes

HOMOMORPHISM_TOL = 1e-10
FUSION_TOL = 1e-6
CHARACTER_TOL = 1e-8


@dataclass(frozen=True)
class DoubleSimple:
    """Canonical representative (g, pi) of a simple object of Rep D(G).

    ``class_rep`` is the minimal-index element of its conjugacy class and
    ``pi`` indexes a row of the centralizer's character table.
    """

    group: GroupTable = field(repr=False)
    class_index: int
    class_rep: int
    pi: int
    dim: int

    def key(self):
        return (self.class_rep, self.pi)


@dataclass(frozen=True)
class DoubleCharacter:
    """Character of a D(G)-module as a function on commuting pairs.

    ``values[(a, b)]`` is the trace of the action of a on the weight-b
    component; keys are exactly the commuting pairs with nonzero trace
    support (missing key = 0).
    """

    group: GroupTable = field(repr=False)
    values: dict = field(repr=False)

    def value(self, a: int, b: int) -> complex:
        return self.values.get((a, b), 0j)

    def by_action_element(self) -> dict:
        """values regrouped as {a: [(b, v), ...]} (cached)."""
        by_a = getattr(self, "_by_a", None)
        if by_a is None:
            by_a = {}
            for (a, b), v in self.values.items():
                by_a.setdefault(a, []).append((b, v))
            object.__setattr__(self, "_by_a", by_a)
        return by_a

    def dimension(self) -> complex:
        return sum(v for (a, b), v in self.values.items() if a == 0)


class DoubleModule:
    """An explicit finite-dimensional D(G)-module: a weight per basis vector
    plus one matrix per group element."""

    __slots__ = ("group", "dim", "weight", "_action", "label")

    def __init__(self, group, weight, action, label="", check=True):
        self.group = group
        self.weight = tuple(int(w) for w in weight)
        self.dim = len(self.weight)
        self._action = {int(g): np.asarray(m, dtype=complex)
                        for g, m in action.items()}
        self.label = label
        if check:
            self._validate()

    def action(self, g: int) -> np.ndarray:
        return self._action[g]

    def _validate(self):
        g = self.group
        d = self.dim
        if set(self._action) != set(range(g.order)):
            raise ValidationError("need one action matrix per group element")
        for u, m in self._action.items():
            if m.shape != (d, d):
                raise ValidationError(f"action({u}) has shape {m.shape}, want {(d, d)}")
        if np.max(np.abs(self._action[0] - np.eye(d))) > HOMOMORPHISM_TOL:
            raise ValidationError("identity does not act as the identity matrix")
        for u in range(g.order):
            mu = self._action[u]
            for v in range(g.order):
                prod = mu @ self._action[v]
                target = self._action[g.mult[u][v]]
                if np.max(np.abs(prod - target)) > HOMOMORPHISM_TOL:
                    raise ValidationError(
                        f"action({u}) action({v}) != action({u}*{v})")
        for u in range(g.order):
            mu = self._action[u]
            for i in range(d):
                for j in range(d):
                    if abs(mu[i, j]) > HOMOMORPHISM_TOL:
                        if self.weight[i] != g.conj(u, self.weight[j]):
                            raise ValidationError(
                                f"action({u}) breaks the weight grading at "
                                f"({i},{j}): wt {self.weight[j]} -> "
                                f"{self.weight[i]} != conjugate")

    def weight_projector(self, h: int) -> np.ndarray:
        return np.diag([1.0 + 0j if w == h else 0j for w in self.weight])

    def direct_sum(self, other: "DoubleModule") -> "DoubleModule":
        _same_group(self.group, other.group)
        d1, d2 = self.dim, other.dim
        action = {}
        for u in range(self.group.order):
            m = np.zeros((d1 + d2, d1 + d2), dtype=complex)
            m[:d1, :d1] = self.action(u)
            m[d1:, d1:] = other.action(u)
            action[u] = m
        return DoubleModule(self.group, self.weight + other.weight, action,
                            label=f"{self.label}+{other.label}", check=False)


@dataclass(frozen=True)
class FusionTensor:
    """Nonnegative-integer fusion multiplicities N[a, b, c] over an ordered
    list of simples (index 0 = unit)."""

    simples: tuple
    N: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.validate()

    def validate(self):
        k = len(self.simples)
        N = self.N
        if N.shape != (k, k, k):
            raise ValidationError("fusion tensor has wrong shape")
        if N.dtype.kind not in "iu" or np.any(N < 0):
            raise ValidationError("fusion multiplicities must be nonnegative ints")
        if np.any(N != N.transpose(1, 0, 2)):
            raise ValidationError("fusion is not commutative")
        unit = np.array([[1 if c == a else 0 for c in range(k)] for a in range(k)])
        if np.any(N[:, 0, :] != unit):
            raise ValidationError("unit constraint N_{a,0}^c = delta fails")
        group = self.simples[0].group
        duals = [dual_simple(s) for s in self.simples]
        dual_index = [_simple_index(group, d) for d in duals]
        for a in range(k):
            for b in range(k):
                want = 1 if b == dual_index[a] else 0
                if N[a, b, 0] != want:
                    raise ValidationError("rigidity constraint N_{ab}^0 fails")
        dims = np.array([s.dim for s in self.simples])
        lhs = N @ dims
        rhs = np.outer(dims, dims)
        if np.any(lhs != rhs):
            raise ValidationError("dimension sum rule fails")


def _same_group(a: GroupTable, b: GroupTable):
    if a is not b and a != b:
        raise GroupMismatchError("values live over different groups")


# ---------------------------------------------------------------------------
# double context (cached per group)

class _DoubleContext:
    def __init__(self, g: GroupTable):
        self.group = g
        self.conj: ConjugacyData = conjugacy_classes(g)
        self.cent_tables = []   # (table, to_sub, chartable) per class
        for c in range(self.conj.num_classes):
            sub = self.conj.centralizers[c]
            table, to_sub = sub.table()
            self.cent_tables.append((table, to_sub, character_table(table)))
        self.simples = self._build_simples()
        self.index_of = {s.key(): i for i, s in enumerate(self.simples)}
        self._characters = {}
        self._fusion = None
        self._duals = None

    def _build_simples(self):
        g = self.group
        out = []
        for c in range(self.conj.num_classes):
            rep = self.conj.reps[c]
            size = len(self.conj.classes[c])
            ct = self.cent_tables[c][2]
            for pi in range(ct.num_irreducibles):
                out.append(DoubleSimple(g, c, rep, pi, size * ct.degrees[pi]))
        total = sum(s.dim ** 2 for s in out)
        if total != g.order ** 2:
            raise ConsistencyError("sum of squared dims != |G|^2")
        return tuple(out)

    def character(self, i: int) -> DoubleCharacter:
        if i not in self._characters:
            self._characters[i] = self._compute_character(self.simples[i])
        return self._characters[i]

    def _compute_character(self, s: DoubleSimple) -> DoubleCharacter:
        g = self.group
        c = s.class_index
        table, to_sub, ct = self.cent_tables[c]
        z_conj = conjugacy_classes(table)
        row = ct.chars[s.pi]
        conjs = self.conj.conjugators[c]
        values = {}
        for b in self.conj.classes[c]:
            k_b = conjs[b]
            # a runs over Z(b) = k_b Z(g) k_b^{-1}; chi is evaluated at the
            # transported element z = k_b^{-1} a k_b in Z(g)
            for z in self.conj.centralizers[c].elements:
                a = g.conj(k_b, z)
                values[(a, b)] = row[z_conj.class_of[to_sub[z]]]
        return DoubleCharacter(g, values)

    def duals(self):
        if self._duals is None:
            out = []
            for i, s in enumerate(self.simples):
                ci = self.conj.class_of[self.group.inv[s.class_rep]]
                cands = [j for j, t in enumerate(self.simples) if t.class_index == ci]
                chi_star = _dual_character(self.character(i))
                match = [j for j in cands
                         if _characters_equal(chi_star, self.character(j))]
                if len(match) != 1:
                    raise ConsistencyError(f"dual of simple {i} not unique: {match}")
                out.append(match[0])
            for i, j in enumerate(out):
                if out[j] != i:
                    raise ConsistencyError("dual map is not an involution")
            self._duals = tuple(out)
        return self._duals

    def fusion(self) -> FusionTensor:
        if self._fusion is None:
            k = len(self.simples)
            chars = [self.character(i) for i in range(k)]
            N = np.zeros((k, k, k), dtype=np.int64)
            for a in range(k):
                for b in range(a, k):
                    t = tensor_character(chars[a], chars[b])
                    for c in range(k):
                        ip = pair_inner_product(t, chars[c])
                        m = round(ip.real)
                        if abs(ip - m) > FUSION_TOL or m < 0:
                            raise ConsistencyError(
                                f"fusion N[{a},{b}]^{c} = {ip} is not a "
                                f"nonnegative integer")
                        N[a, b, c] = m
                        N[b, a, c] = m
            self._fusion = FusionTensor(self.simples, N)
        return self._fusion


def _double(g: GroupTable) -> _DoubleContext:
    if "double" not in g._cache:
        g._cache["double"] = _DoubleContext(g)
    return g._cache["double"]


def _dual_character(x: DoubleCharacter) -> DoubleCharacter:
    inv = x.group.inv
    return DoubleCharacter(x.group,
                           {(inv[a], inv[b]): v for (a, b), v in x.values.items()})


def _characters_equal(x: DoubleCharacter, y: DoubleCharacter,
                      tol: float = CHARACTER_TOL) -> bool:
    keys = set(x.values) | set(y.values)
    return all(abs(x.value(*k) - y.value(*k)) <= tol for k in keys)


def _simple_index(g: GroupTable, s: DoubleSimple) -> int:
    return _double(g).index_of[s.key()]


# ---------------------------------------------------------------------------
# public operations

def double_simples(g: GroupTable) -> tuple:
    """Simple objects of Rep D(G), ordered by (class rep, pi index)."""
    return _double(g).simples


def double_character(s: DoubleSimple) -> DoubleCharacter:
    ctx = _double(s.group)
    return ctx.character(ctx.index_of[s.key()])


def dual_simple(s: DoubleSimple) -> DoubleSimple:
    """The simple with the dual character; involutive."""
    ctx = _double(s.group)
    return ctx.simples[ctx.duals()[ctx.index_of[s.key()]]]


def pair_inner_product(x: DoubleCharacter, y: DoubleCharacter) -> complex:
    """(1/|G|) sum over commuting pairs of x(a,b) conj(y(a,b))."""
    _same_group(x.group, y.group)
    acc = 0j
    yv = y.values
    for key, v in x.values.items():
        w = yv.get(key)
        if w is not None:
            acc += v * w.conjugate()
    return acc / x.group.order


def tensor_character(x: DoubleCharacter, y: DoubleCharacter) -> DoubleCharacter:
    """Character of the tensor product: weights multiply, action is diagonal."""
    _same_group(x.group, y.group)
    mult = x.group.mult
    out = {}
    y_by_a = y.by_action_element()
    for a, xs in x.by_action_element().items():
        ys = y_by_a.get(a)
        if not ys:
            continue
        for b1, v1 in xs:
            row = mult[b1]
            for b2, v2 in ys:
                key = (a, row[b2])
                out[key] = out.get(key, 0j) + v1 * v2
    return DoubleCharacter(x.group, {k: v for k, v in out.items() if abs(v) > 1e-14})


def fusion_tensor(g: GroupTable) -> FusionTensor:
    """Fusion multiplicities via the character pairing, with all tensor
    invariants checked."""
    return _double(g).fusion()


def build_module(g: GroupTable, weight, action, label="") -> DoubleModule:
    """Validated explicit D(G)-module (weights + group action matrices)."""
    return DoubleModule(g, weight, action, label=label)


def module_character(m: DoubleModule) -> DoubleCharacter:
    """Trace of each group element on each weight block."""
    g = m.group
    values = {}
    for a in range(g.order):
        ma = m.action(a)
        diag = np.diagonal(ma)
        for i, w in enumerate(m.weight):
            if abs(diag[i]) > 1e-14:
                values[(a, w)] = values.get((a, w), 0j) + complex(diag[i])
    # diagonal entries vanish automatically unless a and the weight commute
    for (a, b) in values:
        if not g.commutes(a, b):
            raise ConsistencyError("nonzero trace on a non-commuting pair")
    return DoubleCharacter(g, values)


def decompose_module(m: DoubleModule) -> tuple:
    """Multiplicities of each simple in an explicit module."""
    ctx = _double(m.group)
    chi = module_character(m)
    out = []
    for i in range(len(ctx.simples)):
        ip = pair_inner_product(chi, ctx.character(i))
        mult = round(ip.real)
        if abs(ip - mult) > FUSION_TOL or mult < 0:
            raise ConsistencyError(
                f"module multiplicity of simple {i} is {ip}; module is not "
                f"consistent with semisimplicity")
        out.append(mult)
    if sum(mu * s.dim for mu, s in zip(out, ctx.simples)) != m.dim:
        raise ConsistencyError("multiplicities do not add up to the dimension")
    return tuple(out)


def tensor_module(v: DoubleModule, w: DoubleModule) -> DoubleModule:
    """Tensor product module: weights multiply, action is diagonal.  Basis is
    row-major with the left factor major (fixed project-wide)."""
    _same_group(v.group, w.group)
    g = v.group
    weight = tuple(g.mult[a][b] for a in v.weight for b in w.weight)
    action = {u: np.kron(v.action(u), w.action(u)) for u in range(g.order)}
    return DoubleModule(g, weight, action,
                        label=f"{v.label}(x){w.label}", check=False)


def braiding(v: DoubleModule, w: DoubleModule) -> np.ndarray:
    """Matrix of the braiding V (x) W -> W (x) V on row-major product bases:
    v_i (x) w_j  |->  (wt(v_i) . w_j) (x) v_i."""
    _same_group(v.group, w.group)
    dv, dw = v.dim, w.dim
    out = np.zeros((dw * dv, dv * dw), dtype=complex)
    for i in range(dv):
        act = w.action(v.weight[i])
        for j in range(dw):
            col = i * dw + j
            for kk in range(dw):
                if abs(act[kk, j]) > 1e-15:
                    out[kk * dv + i, col] = act[kk, j]
    return out


# ---------------------------------------------------------------------------
# explicit monomial modules (deg pi = 1) and the intertwiner-count oracle

def monomial_module(s: DoubleSimple) -> DoubleModule:
    """Explicit induced module for a simple whose centralizer character is
    linear: basis indexed by the class of g, action by conjugation with a
    transport phase."""
    g = s.group
    ctx = _double(g)
    c = s.class_index
    table, to_sub, ct = ctx.cent_tables[c]
    if ct.degrees[s.pi] != 1:
        raise ValidationError("monomial construction needs a linear character")
    z_conj = conjugacy_classes(table)
    row = ct.chars[s.pi]

    def chi(z):
        return row[z_conj.class_of[to_sub[z]]]

    members = list(ctx.conj.classes[c])
    pos = {b: i for i, b in enumerate(members)}
    conjs = ctx.conj.conjugators[c]
    d = len(members)
    action = {}
    for u in range(g.order):
        m = np.zeros((d, d), dtype=complex)
        for j, b in enumerate(members):
            b2 = g.conj(u, b)
            # transport phase: z = k_{b2}^{-1} u k_b lies in Z(g)
            z = g.mult[g.mult[g.inv[conjs[b2]]][u]][conjs[b]]
            m[pos[b2], j] = chi(z)
        action[u] = m
    return DoubleModule(g, tuple(members), action,
                        label=f"V({s.class_rep},{s.pi})")


def intertwiner_space_dim(a: DoubleModule, b: DoubleModule,
                          c: DoubleModule) -> int:
    """dim Hom(A (x) B, C) in Rep D(G) by explicit linear solve: equivariance
    for every group element plus weight preservation."""
    g = a.group
    _same_group(g, b.group)
    _same_group(g, c.group)
    da, db, dc = a.dim, b.dim, c.dim
    nun = dc * da * db

    def unk(k, i, j):
        return (k * da + i) * db + j

    rows = []
    for u in range(g.order):
        au, bu, cu = a.action(u), b.action(u), c.action(u)
        for k in range(dc):
            for i in range(da):
                for j in range(db):
                    row = np.zeros(nun, dtype=complex)
                    # f(u . (i,j)) entries
                    for i2 in range(da):
                        if abs(au[i2, i]) < 1e-15:
                            continue
                        for j2 in range(db):
                            if abs(bu[j2, j]) > 1e-15:
                                row[unk(k, i2, j2)] += au[i2, i] * bu[j2, j]
                    for k2 in range(dc):
                        if abs(cu[k, k2]) > 1e-15:
                            row[unk(k2, i, j)] -= cu[k, k2]
                    rows.append(row)
    for k in range(dc):
        for i in range(da):
            for j in range(db):
                if c.weight[k] != g.mult[a.weight[i]][b.weight[j]]:
                    row = np.zeros(nun, dtype=complex)
                    row[unk(k, i, j)] = 1.0
                    rows.append(row)
    mat = np.array(rows)
    rank = np.linalg.matrix_rank(mat, tol=1e-8)
    return nun - rank
