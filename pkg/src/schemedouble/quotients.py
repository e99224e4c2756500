"""Quotient pairs of the Drinfeld double: triples (K, H, B), the actions * and
., the cocycle sigma and co-cocycle tau, the quotient Hopf algebra D(K, H, B),
the surjection theta with its kernel ideal, the induced R-matrix and ribbon
element (by two independent routes), triple recognition from an arbitrary
surjection, and induced surjections between quotients.
"""

from __future__ import annotations

from .errors import (
    InvalidTriple,
    NoFactorization,
    NotHopfMorphism,
    NotSurjective,
    VerificationFailure,
)
from .doubles import DoubleData, QuasiHopfData, drinfeld_double
from .groupschemes import (
    CleavingData,
    GroupScheme,
    Quotient,
    SubgroupScheme,
    ad_l,
    centralize,
    cleaving_gamma,
    coadjoint_matrices,
    coinvariant_subspace,
    is_normal,
    quotient_by_normal,
    section_mu,
)
from .hopf import (
    HopfAlgebra,
    LinMap,
    is_hopf_morphism,
    t2_axpy,
    t2_outer,
    verify_hopf,
)
from .linalg import (
    Echelon,
    ParallelEchelon,
    mat_apply,
    mat_kernel,
    unit_vec,
    v_axpy,
    v_scale,
    v_sub,
)


def trivial_hopf_map(H_sub: SubgroupScheme, K_sub: SubgroupScheme) -> LinMap:
    """B = 1: v -> counit(v) 1 from k[H] to O(K)."""
    src = H_sub.own.group_algebra
    tgt = K_sub.own.coordinate_algebra
    F = src.field
    mat = {}
    for j in range(src.dim):
        c = src.counit.get(j)
        if c is not None:
            mat[j] = v_scale(F, c, tgt.unit)
    return LinMap(src, tgt, mat)


def to_own_coords(sub: SubgroupScheme, ambient_vec):
    """Coordinates of an ambient k[G] vector inside k[L]'s canonical basis."""
    coords = sub.subspace.coordinates(ambient_vec)
    if coords is None:
        raise VerificationFailure("vector claimed in subgroup span is not")
    F = sub.ambient.field
    return {i: c for i, c in enumerate(coords) if c != F.zero()}


def t2_to_own(sub: SubgroupScheme, t2):
    """Rewrite a Ten2 with both legs in k[L] in subgroup coordinates."""
    F = sub.ambient.field
    pivots = sub.subspace.pivots()
    pos = {p: r for r, p in enumerate(pivots)}
    rows = sub.subspace.basis()
    out = {}
    for (a, b) in ((a, b) for a in pivots for b in pivots):
        c = t2.get((a, b))
        if c is not None:
            out[(pos[a], pos[b])] = c
    rebuilt = {}
    for (r, s), c in out.items():
        t2_axpy(F, rebuilt, c, t2_outer(F, rows[r], rows[s]))
    if rebuilt != t2:
        raise VerificationFailure("tensor legs leave the subgroup span")
    return out


class Triple:
    """(K, H, B): normal, mutually centralizing subgroup schemes plus a
    G-equivariant Hopf algebra map B: k[H] -> O(K)."""

    def __init__(self, G: GroupScheme, K: SubgroupScheme, H: SubgroupScheme,
                 B: LinMap, check=True):
        self.G = G
        self.K = K
        self.H = H
        self.B = B
        self._coad = None
        self._section = None
        if check:
            self.validate()

    @property
    def coad(self):
        if self._coad is None:
            self._coad = coadjoint_matrices(self.G)
        return self._coad

    @property
    def section(self):
        if self._section is None:
            self._section = section_mu(self.K)
        return self._section

    def star(self, u_ambient, a_own):
        """u * a = q_K(u ->> mu_K(a)); independent of the section."""
        G = self.G
        F = G.field
        lifted = self.section.mu.apply(a_own)
        out = {}
        for i, c in u_ambient.items():
            v_axpy(F, out, c, mat_apply(F, self.coad[i], lifted))
        return self.K.q.apply(out)

    def validate(self):
        G = self.G
        F = G.field
        if not is_normal(self.K):
            raise InvalidTriple("K is not normal")
        if not is_normal(self.H):
            raise InvalidTriple("H is not normal")
        if not centralize(self.K, self.H):
            raise InvalidTriple("K and H do not centralize each other")
        ok, wit = is_hopf_morphism(self.B)
        if not ok:
            raise InvalidTriple(f"B is not a Hopf algebra map ({wit})")
        # equivariance: u * B(v) = B(ad_l(u)(v)) on all basis pairs
        for i in range(G.order):
            u = unit_vec(i, F)
            for j in range(self.H.order):
                v_amb = self.H.iota.apply(unit_vec(j, F))
                lhs = self.star(u, self.B.apply(unit_vec(j, F)))
                conj = ad_l(G, u, v_amb)
                rhs = self.B.apply(to_own_coords(self.H, conj))
                if lhs != rhs:
                    raise InvalidTriple(
                        f"B is not equivariant at (u={G.group_algebra.labels[i]},"
                        f" v={self.H.own.group_algebra.labels[j]})")

    def b_pairing_key(self):
        """Canonical key of the bicharacter <B(v), w> over the canonical
        subgroup bases; identifies B independently of basis bookkeeping."""
        items = []
        for j in sorted(self.B.mat):
            for i, c in sorted(self.B.mat[j].items()):
                items.append((j, i, str(c)))
        return tuple(items)

    def key(self):
        return (self.K.key(), self.H.key(), self.b_pairing_key())

    def fp_dimension(self):
        return self.K.order * (self.G.order // self.H.order)

    def __eq__(self, other):
        return isinstance(other, Triple) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return (f"Triple(|K|={self.K.order}, |H|={self.H.order}, "
                f"B{'!=1' if not self.is_trivial_B() else '=1'})")

    def is_trivial_B(self):
        return self.B.mat == trivial_hopf_map(self.H, self.K).mat


def star_action(triple: Triple, u_ambient, a_own):
    return triple.star(u_ambient, a_own)


def dot_action(triple: Triple, cleaving: CleavingData, x_quotient, a_own):
    """x . a = gamma_H(x) * a."""
    return triple.star(cleaving.gamma.apply(x_quotient), a_own)


def build_sigma(triple: Triple, cleaving: CleavingData):
    """sigma(x, y) = B(gamma(x_1) gamma(y_1) gamma^{-1}(x_2 y_2)) as a dict
    (r, s) -> O(K) vector over the quotient basis."""
    G = triple.G
    F = G.field
    kg = G.group_algebra
    Q = cleaving.quotient.hopf
    gamma, gamma_inv = cleaving.gamma, cleaving.gamma_inv
    sigma = {}
    for r in range(Q.dim):
        for s in range(Q.dim):
            acc = {}
            for (u1, u2), c1 in Q.comult[r].items():
                gu1 = gamma.apply(unit_vec(u1, F))
                for (w1, w2), c2 in Q.comult[s].items():
                    tail = gamma_inv.apply(Q.product(unit_vec(u2, F), unit_vec(w2, F)))
                    term = kg.product(kg.product(gu1, gamma.apply(unit_vec(w1, F))), tail)
                    v_axpy(F, acc, F.mul(c1, c2), term)
            own = to_own_coords(triple.H, acc)
            val = triple.B.apply(own)
            if val:
                sigma[(r, s)] = val
    return sigma


def build_tau(triple: Triple, cleaving: CleavingData):
    """tau(x) = (B (x) B) taubar(x), with
    taubar(x) = eta^{-1}(gamma(x)_1)_1 eta(gamma(x)_2)
                (x) eta^{-1}(gamma(x)_1)_2 eta(gamma(x)_3).
    Returned per quotient basis vector as a Ten2 over O(K); symmetry of the
    two legs is asserted."""
    G = triple.G
    F = G.field
    kg = G.group_algebra
    Q = cleaving.quotient.hopf
    OK = triple.K.own.coordinate_algebra
    tau = {}
    for r in range(Q.dim):
        g = cleaving.gamma.apply(unit_vec(r, F))
        acc = {}
        for (g1, g2, g3), c in kg.delta2(g).items():
            w = cleaving.eta_inv.apply(unit_vec(g1, F))
            e2 = cleaving.eta.apply(unit_vec(g2, F))
            e3 = cleaving.eta.apply(unit_vec(g3, F))
            if not e2 or not e3:
                continue
            for (w1, w2), cw in kg.coproduct(w).items():
                leg1 = kg.product(unit_vec(w1, F), e2)
                leg2 = kg.product(unit_vec(w2, F), e3)
                if leg1 and leg2:
                    t2_axpy(F, acc, F.mul(c, cw), t2_outer(F, leg1, leg2))
        own = t2_to_own(triple.H, acc)
        out = {}
        for (i, j), c in own.items():
            bi = triple.B.apply(unit_vec(i, F))
            bj = triple.B.apply(unit_vec(j, F))
            if bi and bj:
                t2_axpy(F, out, c, t2_outer(F, bi, bj))
        if {(b, a): c for (a, b), c in out.items()} != out:
            raise VerificationFailure("tau is not symmetric in its legs")
        tau[r] = out
    return tau


class QuotientPair:
    """D(K, H, B) together with everything attached to it."""

    def __init__(self, triple, cleaving, section, sigma, tau, D, R, V):
        self.triple = triple
        self.cleaving = cleaving
        self.section = section
        self.sigma = sigma
        self.tau = tau
        self.D = D
        self.qt = QuasiHopfData(D, R, V)
        self._theta = None
        self._double = None

    @property
    def quotient(self) -> Quotient:
        return self.cleaving.quotient

    def index(self, a, r):
        return a * self.quotient.hopf.dim + r

    def theta(self, dd: DoubleData = None, verify=True) -> LinMap:
        if self._theta is None:
            if dd is None:
                dd = drinfeld_double(self.triple.G)
            self._double = dd
            self._theta = build_theta(self, dd, verify=verify)
        return self._theta


def build_quotient(triple: Triple, verify=True, cleaving=None) -> QuotientPair:
    """Assemble D(K,H,B) = O(K)^cop #_sigma^tau k[G/H]:

    product   (a # x)(b # y) = a (x_1 . b) sigma(x_2, y_1) # x_3 y_2,
    coproduct (a # x) -> (a_2 tau(x_1)^1 # x_2) (x) (a_1 tau(x_1)^2 # x_3),
    antipode  S(a # x) = (1 # S(x)) (S(a) # 1).

    The closed-form R-matrix and ribbon element are attached; with
    ``verify`` every Hopf axiom is checked on all basis tuples.
    """
    G = triple.G
    F = G.field
    if cleaving is None:
        quotient = quotient_by_normal(G, triple.H)
        cleaving = cleaving_gamma(G, triple.H, quotient)
    section = triple.section
    Q = cleaving.quotient.hopf
    OK = triple.K.own.coordinate_algebra
    mK, mQ = OK.dim, Q.dim
    idx = lambda a, r: a * mQ + r

    # x . b as a matrix per quotient basis vector
    dot_mats = []
    for r in range(mQ):
        g = cleaving.gamma.apply(unit_vec(r, F))
        cols = {}
        for b in range(mK):
            img = triple.star(g, unit_vec(b, F))
            if img:
                cols[b] = img
        dot_mats.append(cols)

    sigma = build_sigma(triple, cleaving)
    tau = build_tau(triple, cleaving)
    delta2_Q = [Q.delta2(unit_vec(r, F)) for r in range(mQ)]

    labels = [f"{OK.labels[a]}#{Q.labels[r]}" for a in range(mK) for r in range(mQ)]
    mult = {}
    for a in range(mK):
        ea = unit_vec(a, F)
        for r in range(mQ):
            d2r = delta2_Q[r]
            for b in range(mK):
                for s in range(mQ):
                    out = {}
                    for (r1, r2, r3), c1 in d2r.items():
                        dotted = dot_mats[r1].get(b)
                        if dotted is None:
                            continue
                        part1 = OK.product(ea, dotted)
                        if not part1:
                            continue
                        for (s1, s2), c2 in Q.comult[s].items():
                            sig = sigma.get((r2, s1))
                            if sig is None:
                                continue
                            o_part = OK.product(part1, sig)
                            if not o_part:
                                continue
                            k_part = Q.product(unit_vec(r3, F), unit_vec(s2, F))
                            if not k_part:
                                continue
                            coef = F.mul(c1, c2)
                            for oo, co in o_part.items():
                                cc = F.mul(coef, co)
                                for kk, ck in k_part.items():
                                    key = idx(oo, kk)
                                    cur = out.get(key, F.zero())
                                    sm = F.add(cur, F.mul(cc, ck))
                                    if sm == F.zero():
                                        out.pop(key, None)
                                    else:
                                        out[key] = sm
                    if out:
                        mult[(idx(a, r), idx(b, s))] = out

    unit = {}
    for a, ca in OK.unit.items():
        for r, cr in Q.unit.items():
            unit[idx(a, r)] = F.mul(ca, cr)
    comult = {}
    for a in range(mK):
        for r in range(mQ):
            t = {}
            for (a1, a2), ca in OK.comult[a].items():
                for (r1, r2, r3), cr in delta2_Q[r].items():
                    for (t1, t2), ct in tau[r1].items():
                        leg1 = OK.product(unit_vec(a2, F), unit_vec(t1, F))
                        leg2 = OK.product(unit_vec(a1, F), unit_vec(t2, F))
                        if not leg1 or not leg2:
                            continue
                        coef = F.mul(F.mul(ca, cr), ct)
                        for o1, c1 in leg1.items():
                            for o2, c2 in leg2.items():
                                key = (idx(o1, r2), idx(o2, r3))
                                cur = t.get(key, F.zero())
                                sm = F.add(cur, F.mul(coef, F.mul(c1, c2)))
                                if sm == F.zero():
                                    t.pop(key, None)
                                else:
                                    t[key] = sm
            comult[idx(a, r)] = t
    counit = {}
    for a, ca in OK.counit.items():
        for r, cr in Q.counit.items():
            counit[idx(a, r)] = F.mul(ca, cr)

    D = HopfAlgebra(F, labels, mult, unit, comult, counit, {},
                    name=f"D(K{triple.K.order},H{triple.H.order};{G.name})")
    antipode = {}
    for a in range(mK):
        sa = OK.antipode_of(unit_vec(a, F))
        for r in range(mQ):
            sr = Q.antipode_of(unit_vec(r, F))
            left = {}
            for rr, cr in sr.items():
                for o, co in OK.unit.items():
                    left[idx(o, rr)] = F.mul(cr, co)
            right = {}
            for b, cb in sa.items():
                for rr, cr in Q.unit.items():
                    right[idx(b, rr)] = F.mul(cb, cr)
            col = D.product(left, right)
            if col:
                antipode[idx(a, r)] = col
    D.antipode = antipode

    if D.dim != triple.fp_dimension():
        raise VerificationFailure("dim D(K,H,B) != |K|[G:H]")
    if verify:
        rep = verify_hopf(D)
        if not rep.ok:
            raise VerificationFailure(
                "D(K,H,B) violates Hopf axioms: "
                + "; ".join(f"{n} at {w}" for n, w in rep.failures()))

    R, V = _closed_form_r_v(triple, cleaving, D, idx)
    return QuotientPair(triple, cleaving, section, sigma, tau, D, R, V)


def _closed_form_r_v(triple: Triple, cleaving: CleavingData, D, idx):
    """R(K,H,B) = sum_w (B(eta(w_1)) # pi(w_2)) (x) (e^w # 1) and
    V(K,H,B) = sum_w S(e^w) B(eta(w_1)) # pi(w_2), summing over a basis w of
    k[K] with dual basis e^w of O(K).  Computed without building D(G)."""
    G = triple.G
    F = G.field
    kg = G.group_algebra
    OK = triple.K.own.coordinate_algebra
    Q = cleaving.quotient.hopf
    R = {}
    V = {}
    for t in range(triple.K.order):
        w_amb = triple.K.iota.apply(unit_vec(t, F))
        first = {}
        for (x, y), c in kg.coproduct(w_amb).items():
            eta_x = cleaving.eta.apply(unit_vec(x, F))
            if not eta_x:
                continue
            b_val = triple.B.apply(to_own_coords(triple.H, eta_x))
            pi_y = cleaving.quotient.pi.apply(unit_vec(y, F))
            if not b_val or not pi_y:
                continue
            for o, co in b_val.items():
                for r, cr in pi_y.items():
                    key = idx(o, r)
                    cur = first.get(key, F.zero())
                    sm = F.add(cur, F.mul(c, F.mul(co, cr)))
                    if sm == F.zero():
                        first.pop(key, None)
                    else:
                        first[key] = sm
        second = {}
        for r, cr in Q.unit.items():
            second[idx(t, r)] = cr
        t2_axpy(F, R, F.one(), t2_outer(F, first, second))
        s_dual = OK.antipode_of(unit_vec(t, F))
        sv = {}
        for key, c in first.items():
            a, r = divmod(key, Q.dim)
            prod = OK.product(s_dual, unit_vec(a, F))
            for o, co in prod.items():
                k2 = idx(o, r)
                cur = sv.get(k2, F.zero())
                sm = F.add(cur, F.mul(c, co))
                if sm == F.zero():
                    sv.pop(k2, None)
                else:
                    sv[k2] = sm
        v_axpy(F, V, F.one(), sv)
    return R, V


def build_theta(qp: QuotientPair, dd: DoubleData, verify=True) -> LinMap:
    """theta(b |><| u) = q_K(b) B(eta_H(u_1)) # pi_H(u_2)."""
    triple = qp.triple
    G = triple.G
    F = G.field
    kg = G.group_algebra
    Q = qp.quotient.hopf
    OK = triple.K.own.coordinate_algebra
    n = G.order
    mQ = Q.dim
    idx = qp.index

    # image of 1 |><| u_i as a list of (O(K) part, quotient part)
    part_of = []
    for i in range(n):
        acc = {}
        for (x, y), c in kg.comult[i].items():
            eta_x = qp.cleaving.eta.apply(unit_vec(x, F))
            if not eta_x:
                continue
            b_val = triple.B.apply(to_own_coords(triple.H, eta_x))
            pi_y = qp.quotient.pi.apply(unit_vec(y, F))
            if not b_val or not pi_y:
                continue
            for o, co in b_val.items():
                for r, cr in pi_y.items():
                    key = (o, r)
                    cur = acc.get(key, F.zero())
                    sm = F.add(cur, F.mul(c, F.mul(co, cr)))
                    if sm == F.zero():
                        acc.pop(key, None)
                    else:
                        acc[key] = sm
        part_of.append(acc)

    mat = {}
    for a in range(n):
        q_col = triple.K.q.apply(unit_vec(a, F))
        for i in range(n):
            out = {}
            for (o, r), c in part_of[i].items():
                prod = OK.product(q_col, unit_vec(o, F))
                for oo, co in prod.items():
                    key = idx(oo, r)
                    cur = out.get(key, F.zero())
                    sm = F.add(cur, F.mul(c, co))
                    if sm == F.zero():
                        out.pop(key, None)
                    else:
                        out[key] = sm
            if out:
                mat[dd.index(a, i)] = out
    theta = LinMap(dd.D, qp.D, mat)
    if verify:
        ok, wit = is_hopf_morphism(theta)
        if not ok:
            raise VerificationFailure(f"theta is not a Hopf morphism: {wit}")
        if theta.rank() != qp.D.dim:
            raise VerificationFailure("theta is not surjective")
    return theta


def theta_kernel_matches_ideal(qp: QuotientPair, dd: DoubleData) -> bool:
    """ker(theta) must equal the ideal generated by O(G/K)^+ |><| 1 and
    {mu_K(B(v)) |><| 1 - 1 |><| v}, as subspaces of D(G)."""
    triple = qp.triple
    G = triple.G
    F = G.field
    D = dd.D
    N = D.dim
    theta = qp.theta(dd)
    kernel = mat_kernel(F, theta.mat, N)

    gens = []
    coinv = coinvariant_subspace(G, triple.K)
    OG = G.coordinate_algebra
    for c in coinv.basis():
        cplus = v_sub(F, c, v_scale(F, OG.counit_of(c), OG.unit))
        if cplus:
            gens.append(dd.embed_O.apply(cplus))
    for j in range(triple.H.order):
        bv = triple.B.apply(unit_vec(j, F))
        lifted = qp.section.mu.apply(bv)
        v_amb = triple.H.iota.apply(unit_vec(j, F))
        gens.append(v_sub(F, dd.embed_O.apply(lifted), dd.embed_kG.apply(v_amb)))

    ideal = Echelon(F, N)
    for g in gens:
        ideal.insert(g)
    grew = True
    while grew:
        grew = False
        for row in list(ideal.basis()):
            for d in range(N):
                e = unit_vec(d, F)
                if ideal.insert(D.product(e, row)):
                    grew = True
                if ideal.insert(D.product(row, e)):
                    grew = True
    return ideal.key() == kernel.key()


def quotient_r_and_v(qp: QuotientPair, dd: DoubleData = None):
    """The closed-form (R, V) and, when the double is supplied, the pushed
    forward (theta (x) theta)(R) and theta(V); the two routes must agree
    entrywise."""
    if dd is None:
        return qp.qt, None
    from .doubles import canonical_r_and_v
    theta = qp.theta(dd)
    can = canonical_r_and_v(dd)
    F = qp.D.field
    pushed_R = {}
    for (x, y), c in can.R.items():
        tx = theta.apply(unit_vec(x, F))
        ty = theta.apply(unit_vec(y, F))
        t2_axpy(F, pushed_R, c, t2_outer(F, tx, ty))
    pushed_V = theta.apply(can.V)
    if pushed_R != qp.qt.R or pushed_V != qp.qt.V:
        raise VerificationFailure(
            "closed-form R/V disagree with the pushforward along theta")
    return qp.qt, QuasiHopfData(qp.D, pushed_R, pushed_V)


def _preimage_solver(theta: LinMap, N: int):
    """A deterministic right inverse of a surjective map, via a parallel
    echelon of (image, preimage) pairs."""
    F = theta.target.field
    pe = ParallelEchelon(F, theta.target.dim, N)
    for d in range(N):
        img = theta.mat.get(d)
        if img:
            pe.insert(img, unit_vec(d, F))
    def preimage(v):
        out = pe.image_of(v)
        if out is None:
            raise NotSurjective("vector outside the image")
        return out
    return preimage


def recognize_triple(dd: DoubleData, phi: LinMap):
    """Recover (K, H, B) from a surjective Hopf algebra map phi out of D(G),
    together with the isomorphism phibar: D(K,H,B) -> target with
    phibar . theta = phi."""
    G = dd.G
    F = G.field
    n = G.order
    D_target = phi.target
    ok, wit = is_hopf_morphism(phi)
    if not ok:
        raise NotHopfMorphism(f"phi is not a Hopf morphism: {wit}")
    if phi.rank() != D_target.dim:
        raise NotSurjective("phi is not surjective")

    from .groupschemes import subgroup_from_subspace
    from .linalg import annihilator, solve_rows

    # K: annihilator in k[G] of ker(phi | O(G))
    restr = {a: phi.apply(dd.embed_O.apply(unit_vec(a, F))) for a in range(n)}
    ker_O = Echelon(F, n)
    rows_by_out: dict = {}
    for a, col in restr.items():
        for i, c in col.items():
            rows_by_out.setdefault(i, {})[a] = c
    _, kerO = solve_rows(F, [(r, F.zero()) for r in rows_by_out.values()], n)
    K = subgroup_from_subspace(G, annihilator(kerO), name="K")

    # H: kernel of u -> class of phi(1 |><| u) modulo the ideal of phi(O)^+
    OG = G.coordinate_algebra
    ideal = Echelon(F, D_target.dim)
    for a in range(n):
        cplus = v_sub(F, restr[a], v_scale(F, OG.counit.get(a, F.zero()), D_target.unit))
        ideal.insert(cplus)
    grew = True
    while grew:
        grew = False
        for row in list(ideal.basis()):
            for d in range(D_target.dim):
                e = unit_vec(d, F)
                if ideal.insert(D_target.product(e, row)):
                    grew = True
                if ideal.insert(D_target.product(row, e)):
                    grew = True
    def reduce_cls(v):
        return ideal.reduce(v)
    tau_map = {i: reduce_cls(phi.apply(dd.embed_kG.apply(unit_vec(i, F))))
               for i in range(n)}
    tau_unit = reduce_cls(phi.apply(dd.embed_kG.apply(G.group_algebra.unit)))
    # k[H] = {u : u_1 (x) tau(u_2) = u (x) tau(1)}
    kg = G.group_algebra
    coef: dict = {}
    for i in range(n):
        for (a, b), c in kg.comult[i].items():
            for out, cb in tau_map[b].items():
                d = coef.setdefault((a, out), {})
                d[i] = F.add(d.get(i, F.zero()), F.mul(c, cb))
        for out, cu in tau_unit.items():
            d = coef.setdefault((i, out), {})
            d[i] = F.sub(d.get(i, F.zero()), cu)
    rows = [({i: c for i, c in r.items() if c != F.zero()}, F.zero())
            for r in coef.values()]
    _, kerH = solve_rows(F, rows, n)
    H = subgroup_from_subspace(G, kerH, name="H")

    # B: phi(1 |><| v) pulled back through psi(a) = phi(mu_K(a) |><| 1)
    sec = section_mu(K)
    OK = K.own.coordinate_algebra
    psi_cols = {a: phi.apply(dd.embed_O.apply(sec.mu.apply(unit_vec(a, F))))
                for a in range(K.order)}
    pe = ParallelEchelon(F, D_target.dim, K.order)
    for a in range(K.order):
        if pe.insert(psi_cols[a], unit_vec(a, F)) == "conflict":
            raise VerificationFailure("psi is not injective")
    B_mat = {}
    for j in range(H.order):
        v_amb = H.iota.apply(unit_vec(j, F))
        target = phi.apply(dd.embed_kG.apply(v_amb))
        sol = pe.image_of(target)
        if sol is None:
            raise VerificationFailure("phi(k[H]) leaves the O(K) image")
        if sol:
            B_mat[j] = sol
    B = LinMap(H.own.group_algebra, OK, B_mat)

    triple = Triple(G, K, H, B)
    qp = build_quotient(triple)
    theta = qp.theta(dd)
    preimage = _preimage_solver(theta, dd.D.dim)
    phibar_mat = {}
    for e in range(qp.D.dim):
        img = phi.apply(preimage(unit_vec(e, F)))
        if img:
            phibar_mat[e] = img
    phibar = LinMap(qp.D, D_target, phibar_mat)
    ok, wit = is_hopf_morphism(phibar)
    if not ok:
        raise VerificationFailure(f"recognition isomorphism fails: {wit}")
    if phibar.rank() != D_target.dim or qp.D.dim != D_target.dim:
        raise VerificationFailure("recognition map is not an isomorphism")
    for d in range(dd.D.dim):
        lhs = phibar.apply(theta.apply(unit_vec(d, F)))
        if lhs != phi.apply(unit_vec(d, F)):
            raise VerificationFailure("phibar . theta != phi")
    return qp, phibar


def induced_surjection(qp: QuotientPair, qp_src: QuotientPair, dd: DoubleData) -> LinMap:
    """The unique surjection phi: D(K',H',B') -> D(K,H,B) with
    theta = phi . theta', which exists exactly when ker(theta') is contained
    in ker(theta)."""
    theta = qp.theta(dd)
    theta_src = qp_src.theta(dd)
    F = qp.D.field
    N = dd.D.dim
    ker_src = mat_kernel(F, theta_src.mat, N)
    for vec in ker_src.basis():
        if theta.apply(vec):
            raise NoFactorization("theta does not factor through the source pair",
                                  witness=vec)
    preimage = _preimage_solver(theta_src, N)
    mat = {}
    for e in range(qp_src.D.dim):
        img = theta.apply(preimage(unit_vec(e, F)))
        if img:
            mat[e] = img
    phi = LinMap(qp_src.D, qp.D, mat)
    ok, wit = is_hopf_morphism(phi)
    if not ok:
        raise VerificationFailure(f"induced map is not a Hopf morphism: {wit}")
    if phi.rank() != qp.D.dim:
        raise VerificationFailure("induced map is not surjective")
    return phi
