"""The untwisted sector: the function algebra A = F(G) inside Rep D(G),
its decomposition under the commuting automorphism action, the invariants
functor V -> (V (x) A)^G on group representations, and the multiplication
morphism J making it a tensor functor.

Group representations are realized explicitly as single copies cut out of
the regular representation: the isotypic projector composed with a
right-translation eigenprojector of a cyclic subgroup on which the
character restricts with multiplicity one.  The cut is deterministic
(first suitable cyclic subgroup and eigenvalue in index order).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .characters import CharacterTable, ClassFunction, character_table, decompose
from .double import DoubleModule, braiding, decompose_module
from .errors import ConsistencyError, TheoremViolationError, ValidationError
from .groups import GroupTable, conjugacy_classes

RANK_TOL = 1e-8
EXACT_TOL = 1e-10


# ---------------------------------------------------------------------------
# the algebra A = F(G)

@dataclass(frozen=True)
class AlgebraObject:
    """F(G) with pointwise product, left-translation module structure
    (weights all trivial) and the right-translation automorphism action."""

    group: GroupTable
    module: DoubleModule = field(repr=False)
    unit: np.ndarray = field(repr=False)
    autos: tuple = field(repr=False)      # pi_g, one permutation matrix per g
    auto_convention: str = "pi[g] pi[h] = pi[g h]"

    @property
    def dim(self) -> int:
        return self.group.order

    @staticmethod
    def mult(u: np.ndarray, v: np.ndarray) -> np.ndarray:
        """Pointwise product delta_a delta_b = [a=b] delta_a."""
        return u * v


def left_translation(g: GroupTable, u: int) -> np.ndarray:
    m = np.zeros((g.order, g.order), dtype=complex)
    for h in range(g.order):
        m[g.mult[u][h], h] = 1
    return m


def right_translation(g: GroupTable, u: int) -> np.ndarray:
    """pi_u: delta_h -> delta_{h u^-1}."""
    m = np.zeros((g.order, g.order), dtype=complex)
    uinv = g.inv[u]
    for h in range(g.order):
        m[g.mult[h][uinv], h] = 1
    return m


def build_A(g: GroupTable) -> AlgebraObject:
    """The algebra object with every structural invariant verified."""
    if "algebra_A" in g._cache:
        return g._cache["algebra_A"]
    n = g.order
    action = {u: left_translation(g, u) for u in range(n)}
    module = DoubleModule(g, (0,) * n, action, label="A")
    autos = tuple(right_translation(g, u) for u in range(n))
    unit = np.ones(n, dtype=complex)

    basis = np.eye(n, dtype=complex)
    # unital, commutative, associative: pointwise product on delta basis
    for a in range(n):
        if not np.allclose(AlgebraObject.mult(unit, basis[a]), basis[a]):
            raise TheoremViolationError("unit law fails")
        for b in range(n):
            ab = AlgebraObject.mult(basis[a], basis[b])
            if not np.array_equal(ab, AlgebraObject.mult(basis[b], basis[a])):
                raise TheoremViolationError("commutativity fails")
            want = basis[a] if a == b else np.zeros(n)
            if not np.array_equal(ab, want):
                raise TheoremViolationError("pointwise product is wrong")
    # the product is a morphism in C: g.(ab) = (g.a)(g.b)
    for u in range(n):
        L = action[u]
        for a in range(n):
            for b in range(n):
                lhs = L @ AlgebraObject.mult(basis[a], basis[b])
                rhs = AlgebraObject.mult(L @ basis[a], L @ basis[b])
                if not np.array_equal(lhs, rhs):
                    raise TheoremViolationError("product is not equivariant")
    # pi_g: automorphisms, composition law, commuting with the module action
    for u in range(n):
        P = autos[u]
        if np.max(np.abs(P @ unit - unit)) > 0:
            raise TheoremViolationError("automorphism moves the unit")
        for v in range(n):
            if not np.array_equal(autos[u] @ autos[v], autos[g.mult[u][v]]):
                raise TheoremViolationError("pi is not a homomorphism")
            if not np.array_equal(autos[u] @ action[v], action[v] @ autos[u]):
                raise TheoremViolationError("pi does not commute with the action")
        for a in range(n):
            for b in range(n):
                lhs = P @ AlgebraObject.mult(basis[a], basis[b])
                rhs = AlgebraObject.mult(P @ basis[a], P @ basis[b])
                if not np.array_equal(lhs, rhs):
                    raise TheoremViolationError("pi_g is not multiplicative")
    # invariants A^G are the line through the unit
    if invariant_subspace_dim(autos) != 1:
        raise TheoremViolationError("A^G is not one-dimensional")
    # double braiding on A (x) A is the identity (trivial weights)
    R = braiding(module, module)
    if np.max(np.abs(R @ R - np.eye(n * n))) > 0:
        raise TheoremViolationError("R^2 on A(x)A is not the identity")
    # theta_A = id: all constituents of A sit over the identity class
    mults = decompose_module(module)
    from .double import double_simples
    for m, s in zip(mults, double_simples(g)):
        if m and s.class_rep != 0:
            raise TheoremViolationError("A has a twisted constituent")
    obj = AlgebraObject(g, module, unit, autos)
    g._cache["algebra_A"] = obj
    return obj


def invariant_subspace_dim(operators) -> int:
    """Dimension of the common fixed space of a list of matrices."""
    d = operators[0].shape[0]
    stacked = np.vstack([op - np.eye(d) for op in operators])
    rank = np.linalg.matrix_rank(stacked, tol=RANK_TOL)
    return d - rank


# ---------------------------------------------------------------------------
# explicit single-copy irreducibles inside the regular representation

@dataclass(frozen=True)
class ExplicitRep:
    """A concrete unitary representation with its character row index."""

    group: GroupTable
    dim: int
    matrices: tuple = field(repr=False)   # one (dim x dim) array per element

    def act(self, u: int) -> np.ndarray:
        return self.matrices[u]

    def character(self) -> ClassFunction:
        conj = conjugacy_classes(self.group)
        vals = tuple(complex(np.trace(self.matrices[r])) for r in conj.reps)
        return ClassFunction(self.group, vals)

    def dual(self) -> "ExplicitRep":
        return ExplicitRep(self.group, self.dim,
                           tuple(m.conj() for m in self.matrices))

    def direct_sum(self, other: "ExplicitRep") -> "ExplicitRep":
        mats = []
        for u in range(self.group.order):
            m = np.zeros((self.dim + other.dim,) * 2, dtype=complex)
            m[:self.dim, :self.dim] = self.act(u)
            m[self.dim:, self.dim:] = other.act(u)
            mats.append(m)
        return ExplicitRep(self.group, self.dim + other.dim, tuple(mats))

    def tensor(self, other: "ExplicitRep") -> "ExplicitRep":
        mats = tuple(np.kron(self.act(u), other.act(u))
                     for u in range(self.group.order))
        return ExplicitRep(self.group, self.dim * other.dim, mats)


def explicit_irrep(g: GroupTable, lam: int) -> ExplicitRep:
    """A single copy of irreducible ``lam`` cut out of the regular
    representation, with unitary matrices."""
    key = ("explicit_irrep", lam)
    if key in g._cache:
        return g._cache[key]
    ct = character_table(g)
    n = g.order
    d = ct.degrees[lam]
    conj = conjugacy_classes(g)
    chi = [ct.chars[lam][conj.class_of[x]] for x in range(n)]
    L = [left_translation(g, u) for u in range(n)]
    P = sum(chi[u].conjugate() * L[u] for u in range(n)) * (d / n)

    basis = None
    for c in range(n):
        m = g.element_order(c)
        # multiplicity of the j-th character of <c> in the restriction
        powers = [g.power(c, t) for t in range(m)]
        R = [np.zeros((n, n), dtype=complex) for _ in range(m)]
        for t, ct_elem in enumerate(powers):
            for h in range(n):
                R[t][g.mult[h][ct_elem], h] = 1
        for j in range(m):
            mult = sum(chi[powers[t]] * cmath.exp(-2j * cmath.pi * j * t / m)
                       for t in range(m)) / m
            if abs(mult - 1) > 1e-8:
                continue
            Q = sum(cmath.exp(-2j * cmath.pi * j * t / m) * R[t]
                    for t in range(m)) / m
            proj = P @ Q
            if abs(np.trace(proj).real - d) > 1e-8:
                continue
            vals, vecs = np.linalg.eigh(proj)
            cols = vecs[:, vals > 0.5]
            if cols.shape[1] == d:
                basis = cols
                break
        if basis is not None:
            break
    if basis is None:
        raise ConsistencyError(
            f"no cyclic subgroup restricts irreducible {lam} with "
            f"multiplicity one")
    mats = tuple(basis.conj().T @ L[u] @ basis for u in range(n))
    rep = ExplicitRep(g, d, mats)
    # sanity: unitary homomorphism with the right character
    for u in range(n):
        mu = rep.act(u)
        if np.max(np.abs(mu @ mu.conj().T - np.eye(d))) > 1e-8:
            raise ConsistencyError("cut representation is not unitary")
        if abs(np.trace(mu) - chi[u]) > 1e-8:
            raise ConsistencyError("cut representation has the wrong character")
    g._cache[key] = rep
    return rep


def explicit_rep_from_character(g: GroupTable, f: ClassFunction) -> ExplicitRep:
    """Direct sum of explicit irreducibles realizing the character ``f``."""
    ct = character_table(g)
    mults, _ = decompose(f, ct)
    rep = None
    for lam, m in enumerate(mults):
        for _ in range(m):
            piece = explicit_irrep(g, lam)
            rep = piece if rep is None else rep.direct_sum(piece)
    if rep is None:
        raise ValidationError("zero character has no realization")
    return rep


# ---------------------------------------------------------------------------
# the invariants functor and J

@dataclass(frozen=True)
class PhiSpace:
    """The invariant subspace of V (x) A, with its G-module structure taken
    from left translation on the A leg."""

    group: GroupTable
    rep: ExplicitRep = field(repr=False)
    basis: np.ndarray = field(repr=False)   # (dim(V)*|G|, r), orthonormal

    @property
    def dim(self) -> int:
        return self.basis.shape[1]


def phi_space(g: GroupTable, rep: ExplicitRep) -> PhiSpace:
    """(V (x) A)^G for the simultaneous action rho(v) (x) pi_v."""
    n = g.order
    A = build_A(g)
    P = sum(np.kron(rep.act(v), A.autos[v]) for v in range(n)) / n
    vals, vecs = np.linalg.eigh(P)
    basis = vecs[:, vals > 0.5]
    if abs(np.trace(P).real - basis.shape[1]) > 1e-8:
        raise ConsistencyError("invariant projector has non-integer trace")
    return PhiSpace(g, rep, basis)


def untwisted_phi(g: GroupTable, f: ClassFunction) -> tuple:
    """Class of (V (x) A)^G in Rep D(G) as a multiplicity vector over the
    simples of the double (supported on weight-1 simples)."""
    from .double import double_simples
    rep = explicit_rep_from_character(g, f)
    space = phi_space(g, rep)
    n = g.order
    # left translation on the A leg gives the module structure
    ct = character_table(g)
    conj = conjugacy_classes(g)
    traces = []
    for r in conj.reps:
        Lr = np.kron(np.eye(rep.dim), left_translation(g, r))
        traces.append(complex(np.trace(space.basis.conj().T @ Lr @ space.basis)))
    mults, _ = decompose(ClassFunction(g, tuple(traces)), ct)
    simples = double_simples(g)
    out = [0] * len(simples)
    for i, s in enumerate(simples):
        if s.class_rep == 0:
            out[i] = mults[s.pi]
    if sum(m * simples[i].dim for i, m in enumerate(out)) != space.dim:
        raise ConsistencyError("invariant dimension mismatch")
    return tuple(out)


def _j_image_vector(x: np.ndarray, y: np.ndarray, dv: int, dw: int,
                    n: int) -> np.ndarray:
    """J on concrete vectors: reorder V(x)A(x)W(x)A to V(x)W(x)A(x)A and
    multiply in A; the pointwise product makes this a diagonal contraction."""
    xs = x.reshape(dv, n)
    ys = y.reshape(dw, n)
    return np.einsum("ic,jc->ijc", xs, ys).reshape(dv * dw * n)


@dataclass(frozen=True)
class JReport:
    lam: int
    mu: int
    matrix: np.ndarray = field(repr=False)
    rank: int = 0
    source_dim: int = 0
    target_dim: int = 0
    injective: bool = False
    isomorphism: bool = False
    pairing_rank: int = None  # set when mu is the dual of lam


def j_morphism(g: GroupTable, lam: int, mu: int) -> JReport:
    """The morphism J: Phi(V_lam) (x) Phi(V_mu) -> Phi(V_lam (x) V_mu),
    with injectivity/isomorphism verdicts and, for dual pairs, the
    rigidity pairing rank."""
    n = g.order
    ct = character_table(g)
    rep_l = explicit_irrep(g, lam)
    rep_m = explicit_irrep(g, mu)
    sp_l = phi_space(g, rep_l)
    sp_m = phi_space(g, rep_m)
    rep_t = rep_l.tensor(rep_m)
    sp_t = phi_space(g, rep_t)

    cols = []
    for p in range(sp_l.dim):
        for q in range(sp_m.dim):
            z = _j_image_vector(sp_l.basis[:, p], sp_m.basis[:, q],
                                rep_l.dim, rep_m.dim, n)
            coords = sp_t.basis.conj().T @ z
            if np.linalg.norm(z - sp_t.basis @ coords) > 1e-8:
                raise ConsistencyError("J image leaves the invariant subspace")
            cols.append(coords)
    matrix = np.array(cols).T if cols else np.zeros((sp_t.dim, 0))
    rank = int(np.linalg.matrix_rank(matrix, tol=RANK_TOL)) if cols else 0
    source = sp_l.dim * sp_m.dim
    report_pairing = None
    if mu == _dual_irrep_index(ct, lam):
        report_pairing = rigidity_pairing_rank(g, lam)
    return JReport(
        lam=lam, mu=mu, matrix=matrix, rank=rank,
        source_dim=source, target_dim=sp_t.dim,
        injective=rank == source,
        isomorphism=rank == source == sp_t.dim,
        pairing_rank=report_pairing,
    )


def rigidity_pairing_rank(g: GroupTable, lam: int) -> int:
    """Rank of the composite Phi(V*) (x) Phi(V) -> Phi(V* (x) V) -> Phi(C).

    V* is modeled by the literal conjugate matrices, for which coordinate
    pairing is the evaluation morphism.  A perfect pairing has rank equal
    to dim Phi(V)."""
    n = g.order
    rep = explicit_irrep(g, lam)
    rep_star = rep.dual()
    sp = phi_space(g, rep)
    sp_star = phi_space(g, rep_star)
    pair = np.zeros((sp_star.dim, sp.dim), dtype=complex)
    for p in range(sp_star.dim):
        for q in range(sp.dim):
            z = _j_image_vector(sp_star.basis[:, p], sp.basis[:, q],
                                rep_star.dim, rep.dim, n)
            zs = z.reshape(rep_star.dim, rep.dim, n)
            # evaluation V* (x) V -> C pairs coordinates, then A -> A^G = 1
            w = np.einsum("iic->c", zs)
            pair[p, q] = np.sum(w) / np.sqrt(n)
    return int(np.linalg.matrix_rank(pair, tol=RANK_TOL))


def _dual_irrep_index(ct: CharacterTable, lam: int) -> int:
    target = tuple(v.conjugate() for v in ct.chars[lam])
    for i in range(ct.num_irreducibles):
        if all(abs(a - b) < 1e-8 for a, b in zip(ct.chars[i], target)):
            return i
    raise ConsistencyError("dual irreducible not found")


# ---------------------------------------------------------------------------
# decomposition report for A

@dataclass(frozen=True)
class ADecomposition:
    """A = sum over lam of V_lam (x) M_lam: multiplicities in Rep D(G) plus
    the bidecomposition under the commuting automorphism action."""

    module_multiplicities: tuple     # over the simples of the double
    iso_dims: tuple                  # dim of each pi-isotypic block
    pairing: tuple                   # lam -> irreducible index of M_lam's character
    matched: bool = True


def decompose_A(g: GroupTable) -> ADecomposition:
    """Verify A = sum V_lam (x) M_lam with mult(1,lam) = deg(lam), M_lam
    simple and pairwise distinct."""
    from .double import double_simples
    A = build_A(g)
    ct = character_table(g)
    conj = conjugacy_classes(g)
    simples = double_simples(g)
    mults = decompose_module(A.module)
    for m, s in zip(mults, simples):
        want = ct.degrees[s.pi] if s.class_rep == 0 else 0
        if m != want:
            raise TheoremViolationError(
                f"multiplicity of simple {s.key()} in A is {m}, expected {want}")
    n = g.order
    iso_dims = []
    pairing = []
    for lam in range(ct.num_irreducibles):
        d = ct.degrees[lam]
        chi = [ct.chars[lam][conj.class_of[x]] for x in range(n)]
        P = sum(chi[u].conjugate() * A.autos[u] for u in range(n)) * (d / n)
        dim = round(np.trace(P).real)
        if abs(np.trace(P).real - dim) > 1e-8 or dim != d * d:
            raise TheoremViolationError(
                f"pi-isotypic block of {lam} has dimension {np.trace(P).real}, "
                f"expected {d * d}")
        iso_dims.append(dim)
        # left translation restricted to the block must be d copies of a
        # single irreducible (the C-side simple M_lam)
        traces = []
        for r in conj.reps:
            traces.append(complex(np.trace(left_translation(g, r) @ P)))
        block_mults, _ = decompose(ClassFunction(g, tuple(traces)), ct)
        nonzero = [(i, m) for i, m in enumerate(block_mults) if m]
        if len(nonzero) != 1 or nonzero[0][1] != d:
            raise TheoremViolationError(
                f"automorphism block {lam} is not isotypic of multiplicity "
                f"{d}: {block_mults}")
        pairing.append(nonzero[0][0])
    if sorted(pairing) != list(range(ct.num_irreducibles)):
        raise TheoremViolationError("M_lam are not pairwise distinct")
    return ADecomposition(tuple(mults), tuple(iso_dims), tuple(pairing))
