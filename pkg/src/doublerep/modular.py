"""S and T matrices of Rep D(G), Verlinde consistency, and the modularity
criterion for the weight-restricted subcategories.

Normalization: S carries the factor making it unitary (for the double this
is 1/(|Z(a)||Z(b)|) in the class-sum formula, equivalently a global 1/|G|
on the double-braiding trace).  The conjugation convention of the closed
formula is resolved at build time by requiring entrywise agreement with
the independent trace oracle; the resolved tag is recorded.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .characters import character_table, vanishing_virtual_character
from .double import (
    FusionTensor,
    _double,
    dual_simple,
    fusion_tensor,
    pair_inner_product,
)
from .errors import (
    ConsistencyError,
    ModularityError,
    ValidationError,
)
from .groups import GroupTable, Subgroup, conjugacy_classes

MODULAR_TOL = 1e-8
SINGULAR_TOL = 1e-8
WITNESS_TOL = 1e-10


@dataclass(frozen=True)
class ModularData:
    """Ordered simples with the unitary S matrix and the diagonal twist T."""

    simples: tuple
    S: np.ndarray = field(repr=False)
    T: np.ndarray = field(repr=False)
    convention: str = "plain"

    def __post_init__(self):
        self.validate()

    @property
    def group(self) -> GroupTable:
        return self.simples[0].group

    def validate(self, tol: float = MODULAR_TOL):
        g = self.group
        k = len(self.simples)
        S, T = self.S, self.T
        if S.shape != (k, k) or T.shape != (k,):
            raise ValidationError("modular data has wrong shape")
        if abs(T[0] - 1) > tol:
            raise ValidationError("unit twist is not 1")
        for s, th in zip(self.simples, T):
            m = g.element_order(s.class_rep)
            if abs(th ** m - 1) > tol:
                raise ValidationError(
                    "twist is not a root of unity of the class-element order")
        dims = np.array([s.dim for s in self.simples], dtype=float)
        if np.max(np.abs(S[0] - dims / g.order)) > tol:
            raise ValidationError("unit row of S is not dims/|G|")
        if np.max(np.abs(S - S.T)) > tol:
            raise ValidationError("S is not symmetric")
        if np.max(np.abs(S @ S.conj().T - np.eye(k))) > tol:
            raise ValidationError("S is not unitary")


def t_vector(g: GroupTable) -> np.ndarray:
    """Ribbon twists theta_(g,pi) = chi_pi(g) / chi_pi(1)."""
    ctx = _double(g)
    out = []
    for s in ctx.simples:
        table, to_sub, ct = ctx.cent_tables[s.class_index]
        cls = conjugacy_classes(table).class_of[to_sub[s.class_rep]]
        out.append(ct.chars[s.pi][cls] / ct.degrees[s.pi])
    return np.array(out, dtype=complex)


def _s_closed(g: GroupTable, conjugate: bool) -> np.ndarray:
    """Class-sum formula for S.

    S[(a,chi),(b,eta)] = (1/(|Z(a)||Z(b)|)) *
        sum over h in G with [a, h b h^-1] = 1 of
            chi(h b h^-1) eta(h^-1 a h),
    with both characters conjugated when ``conjugate`` is set.
    """
    ctx = _double(g)
    simples = ctx.simples
    k = len(simples)
    conj = ctx.conj

    # per class: element -> class index of the centralizer-as-group
    lookup = []
    for c in range(conj.num_classes):
        table, to_sub, ct = ctx.cent_tables[c]
        z_conj = conjugacy_classes(table)
        lookup.append({e: z_conj.class_of[to_sub[e]]
                       for e in conj.centralizers[c].elements})

    S = np.zeros((k, k), dtype=complex)
    for i, si in enumerate(simples):
        a = si.class_rep
        chi = ctx.cent_tables[si.class_index][2].chars[si.pi]
        look_a = lookup[si.class_index]
        za = len(conj.centralizers[si.class_index].elements)
        for j, sj in enumerate(simples):
            b = sj.class_rep
            eta = ctx.cent_tables[sj.class_index][2].chars[sj.pi]
            look_b = lookup[sj.class_index]
            zb = len(conj.centralizers[sj.class_index].elements)
            acc = 0j
            for h in range(g.order):
                bh = g.conj(h, b)
                if not g.commutes(a, bh):
                    continue
                ah = g.conj(g.inv[h], a)
                term = chi[look_a[bh]] * eta[look_b[ah]]
                acc += term.conjugate() if conjugate else term
            S[i, j] = acc / (za * zb)
    return S


def s_matrix_trace_oracle(g: GroupTable) -> np.ndarray:
    """Independent S from the double-braiding trace:
    S'[i,j] = (1/|G|) sum over commuting (a,b) of chi_i(b,a) chi_j(a,b)."""
    ctx = _double(g)
    k = len(ctx.simples)
    chars = [ctx.character(i) for i in range(k)]
    S = np.zeros((k, k), dtype=complex)
    for i in range(k):
        xi = chars[i].values
        for j in range(i, k):
            acc = 0j
            for (a, b), v in chars[j].values.items():
                w = xi.get((b, a))
                if w is not None:
                    acc += w * v
            S[i, j] = acc / g.order
            S[j, i] = S[i, j]
    return S


def _modular_relation_holds(S: np.ndarray, T: np.ndarray,
                            tol: float = MODULAR_TOL) -> bool:
    """(S T)^3 = lambda S^2 for a unimodular scalar lambda."""
    M = S @ np.diag(T)
    M = M @ M @ M
    S2 = S @ S
    lam = M[0, 0] / S2[0, 0]
    return abs(abs(lam) - 1) <= tol and np.max(np.abs(M - lam * S2)) <= tol


def s_matrix(g: GroupTable) -> tuple[np.ndarray, str]:
    """Unitary S matrix.

    The closed class-sum formula must reproduce the double-braiding trace
    oracle entrywise; the leftover global conjugation freedom is resolved
    by requiring the modular-group relation against the (fixed) twist
    vector.  Returns (S, convention_tag).
    """
    oracle = s_matrix_trace_oracle(g)
    closed = _s_closed(g, conjugate=False)
    if np.max(np.abs(closed - oracle)) > MODULAR_TOL:
        raise ConsistencyError(
            "closed S formula disagrees with the trace oracle beyond the "
            "conjugation convention")
    T = t_vector(g)
    if _modular_relation_holds(oracle, T):
        return oracle, "plain"
    conj = oracle.conj()
    if _modular_relation_holds(conj, T):
        return conj, "conjugated"
    raise ConsistencyError(
        "neither conjugation convention satisfies the modular relation")


def modular_data(g: GroupTable) -> ModularData:
    if "modular" not in g._cache:
        S, tag = s_matrix(g)
        T = t_vector(g)
        g._cache["modular"] = ModularData(_double(g).simples, S, T, tag)
    return g._cache["modular"]


def verlinde(md: ModularData) -> FusionTensor:
    """Fusion multiplicities from the S matrix; must agree exactly with the
    character-oracle fusion tensor."""
    S = md.S
    N = np.einsum("ax,bx,cx,x->abc", S, S, S.conj(), 1.0 / S[0])
    rounded = np.rint(N.real).astype(np.int64)
    if np.max(np.abs(N - rounded)) > 1e-6:
        raise ModularityError("Verlinde numbers are not integers")
    if np.any(rounded < 0):
        raise ModularityError("Verlinde numbers are negative")
    return FusionTensor(md.simples, rounded)


@dataclass(frozen=True)
class RestrictedModular:
    """Verdict for the subcategory of simples with weight class inside H."""

    subgroup: Subgroup
    kept: tuple                  # indices of surviving simples
    S_block: np.ndarray = field(repr=False)
    smallest_singular_value: float = 0.0
    modular: bool = False
    witness: tuple = None        # integer virtual character over Irr(G)
    witness_residual: float = 0.0


def restrict_modular(md: ModularData, h: Subgroup) -> RestrictedModular:
    """Select the simples whose class representative lies in H and decide
    modularity of the S sub-block.

    For proper normal H the verdict is backed by an exact certificate: a
    nonzero integer combination of the weight-1 simples' S rows that
    vanishes on every surviving column.
    """
    if not h.is_normal:
        raise ValidationError("restriction needs a normal subgroup")
    g = md.group
    kept = tuple(i for i, s in enumerate(md.simples) if s.class_rep in h)
    block = md.S[np.ix_(kept, kept)]
    sv = np.linalg.svd(block, compute_uv=False)
    smin = float(sv[-1]) if len(sv) else 0.0
    if h.order == g.order:
        return RestrictedModular(h, kept, block, smin, modular=smin > SINGULAR_TOL)

    m = vanishing_virtual_character(g, h)
    # rows of the weight-1 simples, in centralizer-table order = Irr(G) order
    ct = character_table(g)
    unit_class_simples = [i for i, s in enumerate(md.simples) if s.class_rep == 0]
    if len(unit_class_simples) != ct.num_irreducibles:
        raise ConsistencyError("weight-1 simples do not match Irr(G)")
    combo = np.zeros(len(kept), dtype=complex)
    for coef, i in zip(m, unit_class_simples):
        row = md.S[i, kept]
        combo = combo + coef * row
    resid = float(np.max(np.abs(combo))) if len(kept) else 0.0
    if resid > WITNESS_TOL:
        raise ConsistencyError(
            f"vanishing virtual character does not annihilate the restricted "
            f"S rows (residual {resid:.2e})")
    if smin > SINGULAR_TOL:
        raise ConsistencyError(
            "restricted block is numerically nonsingular despite an exact "
            "singularity witness")
    return RestrictedModular(h, kept, block, smin, modular=False,
                             witness=tuple(m), witness_residual=resid)
