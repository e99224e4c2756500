"""The Drinfeld double D(G) = O(G)^cop |><| k[G] with its canonical R-matrix
and ribbon element, and generic checkers for quasitriangular, ribbon,
triangular, and factorizable structures on any Hopf algebra carrying a
candidate R.

Basis order in D(G) is (coordinate index, group index) row-major: the pair
(a, i) standing for delta_a |><| u_i sits at a * |G| + i.
"""

from __future__ import annotations

from .errors import MissingRibbonElement, NoSolution, VerificationFailure
from .groupschemes import GroupScheme, coadjoint_matrices
from .hopf import (
    HopfAlgebra,
    LinMap,
    VerificationReport,
    is_hopf_morphism,
    t2_axpy,
    t2_outer,
    variant,
)
from .linalg import (
    Echelon,
    mat_apply,
    solve_rows,
    unit_vec,
    v_axpy,
)


class DoubleData:
    def __init__(self, G, D, embed_O, embed_kG, proj_kG, coad):
        self.G = G
        self.D = D
        self.embed_O = embed_O
        self.embed_kG = embed_kG
        self.proj_kG = proj_kG
        self.coad = coad

    def index(self, a, i):
        return a * self.G.order + i


def drinfeld_double(G: GroupScheme, check_embeddings=True) -> DoubleData:
    """Build D(G) with product (b |><| u)(b' |><| u') = b(u_1 ->> b') |><| u_2 u'
    on the tensor coalgebra of O(G)^cop (x) k[G].

    The embeddings of O(G)^cop and k[G], the projection onto k[G], and the
    normality of O(G) inside D(G) are verified on all basis tuples.
    """
    kg = G.group_algebra
    O = G.coordinate_algebra
    F = G.field
    n = G.order
    N = n * n
    idx = lambda a, i: a * n + i
    coad = coadjoint_matrices(G)

    labels = [f"{O.labels[a]}><{kg.labels[i]}" for a in range(n) for i in range(n)]

    mult = {}
    for a in range(n):
        for i in range(n):
            di = kg.comult[i]
            for b in range(n):
                coad_b = [None] * n
                for j in range(n):
                    out = {}
                    for (x, y), c in di.items():
                        w = coad_b[x]
                        if w is None:
                            w = mat_apply(F, coad[x], unit_vec(b, F))
                            coad_b[x] = w
                        if not w:
                            continue
                        o_part = O.product(unit_vec(a, F), w)
                        if not o_part:
                            continue
                        k_part = kg.product(unit_vec(y, F), unit_vec(j, F))
                        if not k_part:
                            continue
                        for oo, co in o_part.items():
                            coc = F.mul(c, co)
                            for kk, ck in k_part.items():
                                key = idx(oo, kk)
                                cur = out.get(key, F.zero())
                                s = F.add(cur, F.mul(coc, ck))
                                if s == F.zero():
                                    out.pop(key, None)
                                else:
                                    out[key] = s
                    if out:
                        mult[(idx(a, i), idx(b, j))] = out

    unit = {}
    for a, ca in O.unit.items():
        for i, ci in kg.unit.items():
            unit[idx(a, i)] = F.mul(ca, ci)

    comult = {}
    for a in range(n):
        da = O.comult[a]
        for i in range(n):
            t = {}
            for (s, u), co in da.items():
                for (x, y), ck in kg.comult[i].items():
                    # cop on the coordinate side: second leg of Delta_O first
                    t[(idx(u, x), idx(s, y))] = F.mul(co, ck)
            comult[idx(a, i)] = t

    counit = {}
    for a, ca in O.counit.items():
        for i, ci in kg.counit.items():
            counit[idx(a, i)] = F.mul(ca, ci)

    D = HopfAlgebra(F, labels, mult, unit, comult, counit, {},
                    name=f"D({G.name})")

    # antipode: S(b |><| u) = (1 |><| S(u)) (S_O(b) |><| 1)
    antipode = {}
    for a in range(n):
        sb = O.antipode_of(unit_vec(a, F))
        for i in range(n):
            su = kg.antipode_of(unit_vec(i, F))
            left = {}
            for j, cj in su.items():
                for o, co in O.unit.items():
                    left[idx(o, j)] = F.mul(cj, co)
            right = {}
            for b, cb in sb.items():
                for j, cj in kg.unit.items():
                    right[idx(b, j)] = F.mul(cb, cj)
            col = D.product(left, right)
            if col:
                antipode[idx(a, i)] = col
    D.antipode = antipode

    embed_O = LinMap(variant(O, "cop"), D,
                     {a: {idx(a, j): cj for j, cj in kg.unit.items()}
                      for a in range(n)})
    embed_kG = LinMap(kg, D,
                      {i: {idx(a, i): ca for a, ca in O.unit.items()}
                       for i in range(n)})
    proj_mat = {}
    for a in range(n):
        ea = O.counit.get(a)
        if ea is None:
            continue
        for i in range(n):
            proj_mat[idx(a, i)] = {i: ea}
    proj_kG = LinMap(D, kg, proj_mat)

    if check_embeddings:
        for f, nm in ((embed_O, "O(G)^cop embedding"),
                      (embed_kG, "k[G] embedding"),
                      (proj_kG, "k[G] projection")):
            ok, wit = is_hopf_morphism(f)
            if not ok:
                raise VerificationFailure(f"{nm} fails: {wit}")
        # normality of O(G): (1|><|u_1)(b|><|1)(1|><|S(u_2)) = (u ->> b) |><| 1
        for i in range(n):
            for b in range(n):
                acc = {}
                for (x, y), c in kg.comult[i].items():
                    lhs = D.product(embed_kG.apply(unit_vec(x, F)),
                                    embed_O.apply(unit_vec(b, F)))
                    lhs = D.product(lhs, embed_kG.apply(kg.antipode_of(unit_vec(y, F))))
                    v_axpy(F, acc, c, lhs)
                expect = embed_O.apply(mat_apply(F, coad[i], unit_vec(b, F)))
                if acc != expect:
                    raise VerificationFailure(
                        f"O(G) not normal in D(G) at ({i},{b})")

    return DoubleData(G, D, embed_O, embed_kG, proj_kG, coad)


class QuasiHopfData:
    """A Hopf algebra with a candidate R-matrix (Ten2) and optional ribbon
    element (Vec)."""

    def __init__(self, algebra: HopfAlgebra, R, V=None):
        self.algebra = algebra
        self.R = R
        self.V = V


def canonical_r_and_v(dd: DoubleData) -> QuasiHopfData:
    """R = sum_u (1 |><| u) (x) (delta_u |><| 1) and V = sum_u S(delta_u) |><| u."""
    G = dd.G
    F = G.field
    n = G.order
    O = G.coordinate_algebra
    kg = G.group_algebra
    R = {}
    for i in range(n):
        left = dd.embed_kG.apply(unit_vec(i, F))
        right = dd.embed_O.apply(unit_vec(i, F))
        t2_axpy(F, R, F.one(), t2_outer(F, left, right))
    V = {}
    for i in range(n):
        sb = O.antipode_of(unit_vec(i, F))
        for b, cb in sb.items():
            key = dd.index(b, i)
            cur = V.get(key, F.zero())
            s = F.add(cur, cb)
            if s == F.zero():
                V.pop(key, None)
            else:
                V[key] = s
    return QuasiHopfData(dd.D, R, V)


def t2_swap(t):
    return {(b, a): c for (a, b), c in t.items()}


def monodromy(Q: QuasiHopfData):
    """R_21 R, the square-braiding element."""
    H = Q.algebra
    return H.tensor_square_product(t2_swap(Q.R), Q.R)


def r_inverse_candidate(Q: QuasiHopfData):
    """(S (x) id)(R), the inverse of any genuine R-matrix."""
    H = Q.algebra
    F = H.field
    out = {}
    for (a, b), c in Q.R.items():
        sa = H.antipode_of(unit_vec(a, F))
        t2_axpy(F, out, c, t2_outer(F, sa, unit_vec(b, F)))
    return out


def _t3_mul(H, x, y):
    F = H.field
    out = {}
    zero = F.zero()
    add, mul = F.add, F.mul
    mult = H.mult
    for (a, b, c), cx in x.items():
        for (d, e, f), cy in y.items():
            m1 = mult.get((a, d))
            if not m1:
                continue
            m2 = mult.get((b, e))
            if not m2:
                continue
            m3 = mult.get((c, f))
            if not m3:
                continue
            coef = mul(cx, cy)
            for i, c1 in m1.items():
                ci = mul(coef, c1)
                for j, c2 in m2.items():
                    cj = mul(ci, c2)
                    for k, c3 in m3.items():
                        key = (i, j, k)
                        s = add(out.get(key, zero), mul(cj, c3))
                        if s == zero:
                            out.pop(key, None)
                        else:
                            out[key] = s
    return out


def verify_quasitriangular(Q: QuasiHopfData) -> VerificationReport:
    """Counit laws, invertibility, the intertwining relation
    R Delta(h) = Delta^cop(h) R, and both hexagon identities, all exact."""
    H = Q.algebra
    F = H.field
    n = H.dim
    rep = VerificationReport(f"R on {H.name or 'dim %d' % n}")

    left_counit = {}
    right_counit = {}
    for (a, b), c in Q.R.items():
        ea = H.counit.get(a)
        if ea is not None:
            v_axpy(F, left_counit, F.mul(c, ea), unit_vec(b, F))
        eb = H.counit.get(b)
        if eb is not None:
            v_axpy(F, right_counit, F.mul(c, eb), unit_vec(a, F))
    rep.record("counit law (eps(x)id)R = 1", left_counit == H.unit)
    rep.record("counit law (id(x)eps)R = 1", right_counit == H.unit)

    rinv = r_inverse_candidate(Q)
    unit2 = t2_outer(F, H.unit, H.unit)
    rep.record("R invertible with (S(x)id)R",
               H.tensor_square_product(Q.R, rinv) == unit2
               and H.tensor_square_product(rinv, Q.R) == unit2)

    ok, wit = True, ""
    for h in range(n):
        dh = H.comult[h]
        dh_cop = {(b, a): c for (a, b), c in dh.items()}
        if H.tensor_square_product(Q.R, dh) != H.tensor_square_product(dh_cop, Q.R):
            ok, wit = False, H.labels[h]
            break
    rep.record("R Delta = Delta^cop R", ok, wit)

    lhs = {}
    for (a, b), c in Q.R.items():
        for (x, y), d in H.comult[a].items():
            key = (x, y, b)
            cur = lhs.get(key, F.zero())
            s = F.add(cur, F.mul(c, d))
            if s == F.zero():
                lhs.pop(key, None)
            else:
                lhs[key] = s
    r13 = {}
    r23 = {}
    for (a, b), c in Q.R.items():
        for u, cu in H.unit.items():
            r13[(a, u, b)] = F.mul(c, cu)
            r23[(u, a, b)] = F.mul(c, cu)
    rep.record("(Delta(x)id)R = R13 R23", lhs == _t3_mul(H, r13, r23))

    lhs = {}
    for (a, b), c in Q.R.items():
        for (x, y), d in H.comult[b].items():
            key = (a, x, y)
            cur = lhs.get(key, F.zero())
            s = F.add(cur, F.mul(c, d))
            if s == F.zero():
                lhs.pop(key, None)
            else:
                lhs[key] = s
    r12 = {}
    for (a, b), c in Q.R.items():
        for u, cu in H.unit.items():
            r12[(a, b, u)] = F.mul(c, cu)
    rep.record("(id(x)Delta)R = R13 R12", lhs == _t3_mul(H, r13, r12))
    return rep


def verify_ribbon(Q: QuasiHopfData) -> VerificationReport:
    """Centrality, invertibility, S(V) = V, eps(V) = 1, and the coproduct law
    Delta(V) = (R21 R)^-1 (V (x) V)."""
    if Q.V is None:
        raise MissingRibbonElement("no ribbon element supplied")
    H = Q.algebra
    F = H.field
    n = H.dim
    V = Q.V
    rep = VerificationReport(f"V on {H.name or 'dim %d' % n}")

    ok, wit = True, ""
    for i in range(n):
        e = unit_vec(i, F)
        if H.product(V, e) != H.product(e, V):
            ok, wit = False, H.labels[i]
            break
    rep.record("V central", ok, wit)

    rep.record("eps(V) = 1", H.counit_of(V) == F.one())
    rep.record("S(V) = V", H.antipode_of(V) == V)

    # invertibility: solve V x = 1, then confirm x V = 1
    cols = {j: H.product(V, unit_vec(j, F)) for j in range(n)}
    rows_by_i: dict = {}
    for j, col in cols.items():
        for i, v in col.items():
            rows_by_i.setdefault(i, {})[j] = v
    sys_rows = []
    for i in range(n):
        sys_rows.append((rows_by_i.get(i, {}), H.unit.get(i, F.zero())))
    inv_ok = True
    try:
        part, _ = solve_rows(F, sys_rows, n)
        vinv = {j: c for j, c in part.items() if c != F.zero()}
        inv_ok = H.product(vinv, V) == H.unit and H.product(V, vinv) == H.unit
    except NoSolution:
        inv_ok = False
    rep.record("V invertible", inv_ok)

    mono = monodromy(Q)
    rinv = r_inverse_candidate(Q)
    mono_inv = H.tensor_square_product(rinv, t2_swap(rinv))
    unit2 = t2_outer(F, H.unit, H.unit)
    sane = (H.tensor_square_product(mono, mono_inv) == unit2)
    lhs = H.coproduct(V)
    rhs = H.tensor_square_product(mono_inv, t2_outer(F, V, V))
    rep.record("Delta(V) = (R21 R)^-1 (V(x)V)", sane and lhs == rhs)
    return rep


def is_triangular(Q: QuasiHopfData) -> bool:
    H = Q.algebra
    return monodromy(Q) == t2_outer(H.field, H.unit, H.unit)


def is_factorizable(Q: QuasiHopfData) -> bool:
    """Full rank of the Drinfeld map f -> (f (x) id)(R21 R)."""
    H = Q.algebra
    F = H.field
    mono = monodromy(Q)
    cols: dict = {}
    for (a, b), c in mono.items():
        cols.setdefault(a, {})[b] = c
    ech = Echelon(F, H.dim)
    for a in sorted(cols):
        ech.insert(cols[a])
    return ech.dim == H.dim
