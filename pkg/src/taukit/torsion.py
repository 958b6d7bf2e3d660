"""Torsion pairs inside a fixed 2-cluster-tilting subcategory.

Candidate torsion classes are subsets of the indecomposables of C; the
2-functorial finiteness conditions are checked with multiplicity-full
approximations, whose failure implies failure for every approximation
(anything else factors through the full one).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from . import highercat as hc
from . import modcat as mc
from .exactlin import Mat, kernel_basis, rank
from .highercat import ExactSeq, Subcat


class TooLargeError(Exception):
    pass


class SequenceFailedError(Exception):
    """A canonical sequence failed for a supposedly verified pair."""


def right_full_approx(X: Subcat, M) -> mc.ModMap:
    """Multiplicity-full right X-approximation of M."""
    return hc.right_full_approximation(X.modules(), M).map


def left_full_approx(M, X: Subcat) -> mc.ModMap:
    return hc.left_full_approximation(M, X.modules()).map


def _middle_exact_against(C0, X2, X1, M, g, f, side: str) -> bool:
    """Exactness of Hom(C0, X2) -> Hom(C0, X1) -> Hom(C0, M) at the middle
    (or the Hom(-, C0) version for the covariant side)."""
    A = M.algebra
    field = A.field
    if side == "contra":
        H2 = mc.hom_basis(C0, X2)
        H1 = mc.hom_basis(C0, X1)
        vec_len1 = sum(X1.dims[v] * C0.dims[v] for v in A.vertices)
        vec_lenM = sum(M.dims[v] * C0.dims[v] for v in A.vertices)
        d1 = [mc.hom_to_vector(g.compose(phi)) for phi in H2]
        d2 = [mc.hom_to_vector(f.compose(phi)) for phi in H1]
    else:
        H2 = mc.hom_basis(X2, C0)
        H1 = mc.hom_basis(X1, C0)
        vec_len1 = sum(C0.dims[v] * X1.dims[v] for v in A.vertices)
        vec_lenM = sum(C0.dims[v] * M.dims[v] for v in A.vertices)
        d1 = [mc.hom_to_vector(phi.compose(g)) for phi in H2]
        d2 = [mc.hom_to_vector(phi.compose(f)) for phi in H1]
    m1 = Mat.from_rows(field, d1, cols=vec_len1) if d1 else Mat.zeros(field, 0, vec_len1)
    m2 = Mat.from_rows(field, d2, cols=vec_lenM) if d2 else Mat.zeros(field, 0, vec_lenM)
    return rank(m1) + rank(m2) == len(H1)


def is_2_finite(X: Subcat, C: Subcat, side: str):
    """2-contravariant ('contra') or 2-covariant ('co') finiteness of X in C.

    Returns (ok, certificates) where certificates maps each member index of C
    to the probing sequence X2 -> X1 -> M (or its dual).
    """
    if side not in ("contra", "co"):
        raise ValueError("side must be 'contra' or 'co'")
    members = X.modules()
    certs = {}
    ok = True
    for mi in C.member_list():
        M = C.host.modules[mi]
        if side == "contra":
            ap1 = hc.right_full_approximation(members, M)
            parts = mc.map_parts(ap1.map)
            ap2 = hc.right_full_approximation(members, parts.kernel)
            g = parts.kernel_inclusion.compose(ap2.map)  # X2 -> X1
            f = ap1.map
            seq = ExactSeq([ap2.source, ap1.source, M], [g, f])
            good = all(_middle_exact_against(C0, ap2.source, ap1.source, M, g, f, "contra")
                       for C0 in C.modules())
        else:
            ap1 = hc.left_full_approximation(M, members)
            parts = mc.map_parts(ap1.map)
            ap2 = hc.left_full_approximation(parts.cokernel, members)
            g = ap2.map.compose(parts.cokernel_projection)  # X1 -> X2
            f = ap1.map
            seq = ExactSeq([M, ap1.target, ap2.target], [f, g])
            good = all(_middle_exact_against(C0, ap2.target, ap1.target, M, g, f, "co")
                       for C0 in C.modules())
        certs[mi] = seq
        ok = ok and good
    return ok, certs


@dataclass
class TorsPair2FF:
    C: Subcat
    T: Subcat
    F: Subcat
    certs: dict

    def key(self):
        return (self.T.key(), self.F.key())

    def to_json(self, include_certs: bool = False) -> dict:
        out = {
            "torsion": self.T.dim_vectors(),
            "torsion_free": self.F.dim_vectors(),
        }
        if include_certs:
            def chain(seq):
                return [list(m.dim_vector()) for m in seq.modules]

            out["finiteness_certificates"] = {
                name: {str(mi): chain(seq) for mi, seq in sorted(certs.items())}
                for name, certs in sorted(self.certs.items())
            }
            out["canonical_sequences"] = {
                str(mi): chain(canonical_sequence(self, self.C.host.modules[mi]))
                for mi in self.C.member_list()
            }
        return out


def is_torsion_pair_2ff(T: Subcat, F: Subcat, C: Subcat):
    """All torsion-pair axioms plus 2-functorial finiteness of both halves.

    Returns (ok, witness) with a human-readable witness on failure.
    """
    idx = C.host
    for t in T.member_list():
        for f in F.member_list():
            if idx.hom_dim(t, f) != 0:
                return False, f"hom({t},{f}) nonzero"
    perp_F = {x for x in C.member_list()
              if all(idx.hom_dim(x, f) == 0 for f in F.member_list())}
    if perp_F != set(T.member_list()):
        return False, f"torsion part not maximal: {sorted(perp_F)}"
    T_perp = {y for y in C.member_list()
              if all(idx.hom_dim(t, y) == 0 for t in T.member_list())}
    if T_perp != set(F.member_list()):
        return False, f"torsion-free part not maximal: {sorted(T_perp)}"
    for X, name in ((T, "T"), (F, "F")):
        for side in ("contra", "co"):
            ok, _ = is_2_finite(X, C, side)
            if not ok:
                return False, f"{name} not 2-{side}variantly finite"
    return True, None


def canonical_sequence(pair: TorsPair2FF, M) -> ExactSeq:
    """T_M -> M -> F_M with the approximation maps, exact at M."""
    t_ap = hc.right_full_approximation(pair.T.modules(), M)
    f_ap = hc.left_full_approximation(M, pair.F.modules())
    comp = f_ap.map.compose(t_ap.map)
    if not comp.is_zero():
        raise SequenceFailedError("composite T_M -> M -> F_M is nonzero")
    A = M.algebra
    for v in A.vertices:
        if rank(t_ap.map.mats[v]) + rank(f_ap.map.mats[v]) != M.dims[v]:
            raise SequenceFailedError("sequence not exact at the middle term")
    return ExactSeq([t_ap.source, M, f_ap.target], [t_ap.map, f_ap.map])


@dataclass
class PushoutLift:
    ok: bool
    row: ExactSeq | None = None
    verticals: list | None = None
    obstruction: str | None = None
    low_confidence: bool = False


def _add_objects(T: Subcat, max_mult: int):
    """Objects of add T with per-summand multiplicity <= max_mult, by total dim."""
    members = T.modules()
    combos = []
    for mults in itertools.product(range(max_mult + 1), repeat=len(members)):
        if sum(mults) == 0:
            continue
        total = sum(m * X.total_dim for m, X in zip(mults, members))
        combos.append((total, mults))
    combos.sort()
    A = T.host.algebra
    for _, mults in combos:
        parts = []
        for m, X in zip(mults, members):
            parts.extend([X] * m)
        yield mc.direct_sum(A, parts).module


def pushout_lift_check(T: Subcat, C: Subcat, seq: ExactSeq,
                       max_mult: int = 3, tries: int = 64) -> PushoutLift:
    """Search for a lift 0 -> T0' -> T1' -> T2' -> T3 -> 0 over the sequence.

    The sequence must be 2-exact in C with both end terms in add T.  Rows of
    the found diagram are exact, the verticals commute, and every primed term
    lies in add T.  Exhausting the bounded search yields NO_LIFT with a low
    confidence flag rather than a counterexample claim.
    """
    if len(seq.modules) != 4:
        raise ValueError("need a 4-term sequence")
    if not seq.is_exact():
        raise ValueError("sequence is not 2-exact")
    T0, Xm, Ym, T3 = seq.modules
    if not (T.contains(T0) and T.contains(T3)):
        raise ValueError("end terms must lie in add T")
    A = T0.algebra
    rng = random.Random(0)
    if T.contains(Xm) and T.contains(Ym):
        ident = [mc.ModMap.identity(m) for m in seq.modules]
        return PushoutLift(True, seq, ident)

    w1, w2, w3 = seq.maps  # T0 -> X, X -> Y, Y -> T3

    for T2p in _add_objects(T, max_mult):
        u = _find_u(T2p, Ym, T3, w3, rng, tries)
        if u is None:
            continue
        v_map = w3.compose(u)
        ker_v = {vx: T2p.dims[vx] - rank(v_map.mats[vx]) for vx in A.vertices}
        for T1p in _add_objects(T, max_mult):
            lift = _solve_middle_stage(T, seq, T2p, u, v_map, ker_v, T1p, rng, tries)
            if lift is not None:
                return lift
    return PushoutLift(False, obstruction="bounded search exhausted",
                       low_confidence=True)


def _find_u(T2p, Ym, T3, w3, rng, tries):
    """Some u: T2' -> Y with w3 o u epi, by bounded max-rank search."""
    A = Ym.algebra
    hom_u = mc.hom_basis(T2p, Ym)
    if not hom_u:
        return None
    targets = {v: T3.dims[v] for v in A.vertices}

    def hits(cand):
        comp = w3.compose(cand)
        return all(rank(comp.mats[v]) == targets[v] for v in A.vertices)

    for b in hom_u:
        if hits(b):
            return b
    for _ in range(tries):
        cand = mc.ModMap.zero(T2p, Ym)
        for b in hom_u:
            c = rng.randrange(A.field.p)
            if c:
                cand = cand.add(b.scale(c))
        if hits(cand):
            return cand
    return None


def _solve_middle_stage(T, seq, T2p, u, v_map, ker_v, T1p, rng, tries):
    """Find w: T1' -> T2' and d1: T1' -> X completing the lift, or None."""
    T0, Xm, Ym, T3 = seq.modules
    w1, w2, w3 = seq.maps
    A = T0.algebra
    field = A.field
    basis_w = mc.hom_basis(T1p, T2p)
    basis_d = mc.hom_basis(T1p, Xm)
    if not basis_w:
        return None
    # linear constraints: v o w = 0 and u o w = w2 o d1
    cols = []
    for b in basis_w:
        cols.append(mc.hom_to_vector(v_map.compose(b)) + mc.hom_to_vector(u.compose(b)))
    for b in basis_d:
        zero_part = tuple(0 for _ in mc.hom_to_vector(v_map.compose(basis_w[0])))
        cols.append(zero_part + tuple((-x) % field.p for x in mc.hom_to_vector(w2.compose(b))))
    total_len = len(cols[0])
    mat = Mat.from_columns(field, cols, rows=total_len)
    sols = kernel_basis(mat)
    if not sols:
        return None

    def build(coeffs):
        w = mc.ModMap.zero(T1p, T2p)
        d = mc.ModMap.zero(T1p, Xm)
        for c, b in zip(coeffs[:len(basis_w)], basis_w):
            if c:
                w = w.add(b.scale(c))
        for c, b in zip(coeffs[len(basis_w):], basis_d):
            if c:
                d = d.add(b.scale(c))
        return w, d

    candidates = list(sols)[:tries]
    rng_combo = []
    for _ in range(tries):
        coeffs = [0] * (len(basis_w) + len(basis_d))
        for kv in sols:
            c = rng.randrange(field.p)
            if c:
                coeffs = [(x + c * y) % field.p for x, y in zip(coeffs, kv)]
        rng_combo.append(tuple(coeffs))
    for coeffs in candidates + rng_combo:
        w, d1 = build(coeffs)
        if not all(rank(w.mats[v]) == ker_v[v] for v in A.vertices):
            continue
        parts = mc.map_parts(w)
        T0p = parts.kernel
        if not T.contains(T0p):
            continue
        iota = parts.kernel_inclusion
        # vertical T0' -> T0 through the mono T0 -> X
        d1_res = d1.compose(iota)
        mats = {}
        good = True
        for v in A.vertices:
            from .exactlin import solve_matrix
            sol = solve_matrix(w1.mats[v], d1_res.mats[v])
            if sol is None:
                good = False
                break
            mats[v] = sol
        if not good:
            continue
        d0 = mc.ModMap(T0p, T0, mats, check=False)
        row = ExactSeq([T0p, T1p, T2p, T3], [iota, w, w3.compose(u)])
        if not row.is_exact():
            continue
        verticals = [d0, d1, u, mc.ModMap.identity(T3)]
        if not w1.compose(d0).sub(d1.compose(iota)).is_zero():
            continue
        if not w2.compose(d1).sub(u.compose(w)).is_zero():
            continue
        return PushoutLift(True, row, verticals)
    return None


def enumerate_2ff_torsion_pairs(C: Subcat, max_members: int = 20) -> list:
    """All 2-functorially-finite torsion pairs in C, canonically ordered."""
    n = len(C.members)
    if n > max_members:
        raise TooLargeError(f"{n} members exceeds the subset budget {max_members}")
    idx = C.host
    pairs = []
    seen = set()
    for r in range(n + 1):
        for S in itertools.combinations(C.member_list(), r):
            Sset = set(S)
            F = frozenset(y for y in C.member_list()
                          if all(idx.hom_dim(t, y) == 0 for t in Sset))
            perp_F = {x for x in C.member_list()
                      if all(idx.hom_dim(x, f) == 0 for f in F)}
            if perp_F != Sset:
                continue
            T = Subcat.of(idx, Sset)
            Fsub = Subcat.of(idx, F)
            ok, _ = is_torsion_pair_2ff(T, Fsub, C)
            if not ok:
                continue
            certs = {}
            for X, name in ((T, "T"), (Fsub, "F")):
                for side in ("contra", "co"):
                    _, cert = is_2_finite(X, C, side)
                    certs[f"{name}_{side}"] = cert
            pair = TorsPair2FF(C, T, Fsub, certs)
            if pair.key() not in seen:
                seen.add(pair.key())
                pairs.append(pair)
    pairs.sort(key=lambda p: p.key())
    return pairs
