"""Flat 2+1 spacetimes from weighted multicurves.

Translation cocycles deform the linear holonomy f to the affine action
rho(g) x = f(g) x + t_g.  The deformed development of the hyperboloid is
f(p) = p + x(p) where x(p) is the transverse vector from the basepoint
region to p; the resulting surface's domain of dependence is cut out by
null support planes, one per null direction, whose offsets are the
maxima over the translated complementary regions.  The cyclic and torus
model spacetimes are provided explicitly.
"""

from __future__ import annotations

import math

import numpy as np

from . import laminations as lam
from .fuchsian import Mat2, concat, reduce_word, surface_relator, Representation
from .minkowski import (
    LorentzIsometry,
    adjoint_to_so21,
    boost_y_axis,
    hyperboloid_normalize,
    inner,
)


def cyclic_boost_rep(lam_):
    """The cyclic group of the boost T(lam) fixing the spacelike y-axis,
    packaged as a (degenerate) genus-1 representation with second
    generator the identity so word machinery applies."""
    c, s = math.cosh(lam_ / 2), math.sinh(lam_ / 2)
    return Representation(1, [np.array([[c, -s], [-s, c]]), np.eye(2)])


class TranslationCocycle:
    """Map from words to vectors with t_{ab} = t_a + f(a) t_b.

    Stored as one vector per generator; values on words are computed by
    the extension rule, so the cocycle identity holds identically on
    free words.  Whether the values descend to the group is measured by
    relator_residual and by cocycle_residual on canonical ball
    representatives.
    """

    def __init__(self, rep, gen_vectors):
        if len(gen_vectors) != 2 * rep.genus:
            raise ValueError("expected one vector per generator")
        self.rep = rep
        # extended precision: word extensions multiply by linear parts
        # whose norms grow exponentially in word length, and the cocycle
        # identity is checked to absolute (not relative) tolerance
        self.gen_vectors = [np.asarray(v, dtype=np.longdouble) for v in gen_vectors]
        self._linear = {}
        self._cache = {}

    def linear(self, w):
        w = reduce_word(w)
        out = self._linear.get(w)
        if out is None:
            if len(w) <= 1:
                out = adjoint_to_so21(self.rep.evaluate(w)).astype(np.longdouble)
            else:
                # prefix recursion so repeated queries share work
                out = self.linear(w[:-1]) @ self.linear(w[-1:])
            self._linear[w] = out
        return out

    def _letter_vector(self, x):
        g = abs(x) - 1
        if x > 0:
            return self.gen_vectors[g]
        return -(self.linear((x,)) @ self.gen_vectors[g])

    def value(self, w):
        """Extension of the generator vectors along the reduced word w."""
        w = reduce_word(w)
        out = self._cache.get(w)
        if out is None:
            if not w:
                out = np.zeros(3, dtype=np.longdouble)
            elif len(w) == 1:
                out = self._letter_vector(w[0])
            else:
                out = self.value(w[:-1]) + self.linear(w[:-1]) @ self._letter_vector(w[-1])
            self._cache[w] = out
        return out

    def to_json(self):
        return {"t": [[float(v) for v in t] for t in self.gen_vectors]}


def _eval_cached(rep, w):
    """Word evaluation with a prefix cache stored on the representation;
    residual sweeps over all ball pairs revisit many products."""
    cache = getattr(rep, "_eval_cache", None)
    if cache is None:
        cache = {(): Mat2.identity()}
        rep._eval_cache = cache
    out = cache.get(w)
    if out is None:
        out = _eval_cached(rep, w[:-1]) @ rep.evaluate(w[-1:])
        cache[w] = out
    return out


def zero_cocycle(rep):
    return TranslationCocycle(rep, [np.zeros(3)] * (2 * rep.genus))


def coboundary_cocycle(rep, v):
    """t_g = v - f(g) v, exact on the group by telescoping."""
    v = np.asarray(v, dtype=float)
    vecs = [v - adjoint_to_so21(g) @ v for g in rep.generators]
    return TranslationCocycle(rep, vecs)


def cocycle_from_lamination(rep, mc, basepoint=None, L=3):
    """t_g = transverse vector from the basepoint to its g-image."""
    if basepoint is None:
        basepoint = lam.default_basepoint(rep, mc, L)
    vecs = []
    for i in range(2 * rep.genus):
        f = adjoint_to_so21(rep.generators[i])
        vecs.append(lam.transverse_vector(rep, mc, basepoint, f @ basepoint, L))
    coc = TranslationCocycle(rep, vecs)
    coc.basepoint = basepoint
    return coc


def cocycle_residual(rep, coc, alpha, beta, ball=None):
    """Norm of t_{alpha beta} - t_alpha - f(alpha) t_beta.

    The product word is replaced by its canonical ball representative
    when the product matrix is found in the ball, so a cocycle that does
    not descend to the group (e.g. a perturbed one) shows a residual on
    pairs whose free concatenation is not the canonical representative.
    """
    alpha = reduce_word(alpha)
    beta = reduce_word(beta)
    prod = concat(alpha, beta)
    if ball is not None:
        hit = ball.lookup(_eval_cached(rep, prod))
        if hit is not None:
            prod = hit[0]
    res = coc.value(prod) - coc.value(alpha) - coc.linear(alpha) @ coc.value(beta)
    return float(np.max(np.abs(res)))


def cocycle_identity_sweep(rep, coc, ball):
    """Max cocycle-identity residual over all word pairs of the ball.

    Equivalent to looping cocycle_residual over every pair, but batched:
    product matrices are formed in one matmul per row and canonical ball
    representatives are resolved through the ball's key map.
    """
    items = ball.items()
    words = [w for w, _ in items]
    mats = np.array([m.m for _, m in items])
    # extended precision throughout: the three terms are exponentially
    # large in word length and cancel to near machine zero
    T = np.array([coc.value(w) for w in words], dtype=np.longdouble)
    F = np.array([coc.linear(w) for w in words], dtype=np.longdouble)
    digits = ball._key_digits
    index = {m.key(digits): k for k, (w, m) in enumerate(items)}
    worst = 0.0
    free_vals = {}
    for i, alpha in enumerate(words):
        prods = mats[i] @ mats
        base = T[i] + T @ F[i].T
        for j, beta in enumerate(words):
            m = prods[j]
            flat = m.ravel()
            for x in flat:
                if abs(x) > 1e-12:
                    if x < 0:
                        flat = -flat
                    break
            key = (round(flat[0], digits), round(flat[1], digits),
                   round(flat[2], digits), round(flat[3], digits))
            k = index.get(key)
            if k is not None and abs(mats[k] - flat.reshape(2, 2)).max() < 1e-5:
                val = T[k]
            else:
                w = concat(alpha, beta)
                val = free_vals.get(w)
                if val is None:
                    val = coc.value(w)
                    free_vals[w] = val
            r = float(np.max(np.abs(val - base[j])))
            if r > worst:
                worst = r
    return worst


def relator_residual(rep, coc):
    return float(np.max(np.abs(coc.value(rep.relator()))))


def cyclic_boost_cocycle(lam_, weight, L=1):
    """Displacement across the weighted axis leaf of the boost T(lam):
    the transverse vector between mirror points on the two sides of the
    axis plane {y = 0}.  This is the translation part (0, weight, 0) of
    the corresponding model spacetime holonomy; the word cocycle of the
    boost generator itself vanishes since the generator path never
    crosses its own axis."""
    rep = cyclic_boost_rep(lam_)
    mc = lam.WeightedMulticurve([((1,), weight)])
    p = hyperboloid_normalize(np.array([0.1, -0.4, 1.2]))
    q = hyperboloid_normalize(np.array([0.1, 0.4, 1.2]))
    return lam.transverse_vector(rep, mc, p, q, L)


class DevelopedSurfacePatch:
    """Samples of the deformed development f(p) = p + x(p)."""

    def __init__(self, rep, mc, basepoint, points, xvals, perturbed):
        self.rep = rep
        self.mc = mc
        self.basepoint = basepoint
        self.points = np.asarray(points, dtype=float)
        self.xvals = np.asarray(xvals, dtype=float)
        self.fvals = self.points + self.xvals
        self.perturbed = list(perturbed)

    def __len__(self):
        return len(self.points)

    def region_translations(self, ndigits=7):
        """Unique x values over the sampled complementary regions."""
        seen = {}
        for x in self.xvals:
            seen.setdefault(tuple(np.round(x, ndigits)), np.asarray(x))
        return list(seen.values())


def develop_surface(rep, mc, radius=1.5, density=200, basepoint=None, L=3, seed=0):
    """Sample the deformed development over a hyperbolic disc.

    Points are area-uniform in the disc of hyperbolic radius `radius`
    about the basepoint; samples within tolerance of a leaf plane are
    nudged off it and flagged.
    """
    if basepoint is None:
        basepoint = lam.default_basepoint(rep, mc, L)

    # stabilize the leaf set against the sampled disc: grow the radius
    # until two consecutive increments add no leaves meeting the disc.
    # |<n, b>| = sinh(distance from b to the leaf), so the cutoff below
    # keeps exactly the leaves within reach of the samples
    reach = math.sinh(radius + 0.5)

    def leaves_at(r):
        out = {}
        for leaf, w, _ in lam.multicurve_lifts(rep, mc, r):
            if abs(leaf.side(basepoint)) < reach:
                out[leaf.key(7)] = (leaf, w)
        return out

    r = min(L, lam.HARD_CAP)
    cur = leaves_at(r)
    stable = 0
    while stable < 2:
        if r >= lam.HARD_CAP:
            raise lam.EnumerationCapError("leaf set did not stabilize below the cap")
        r += 1
        nxt = leaves_at(r)
        stable = stable + 1 if len(nxt) == len(cur) else 0
        cur = nxt
    leaves = list(cur.values())

    rng = np.random.default_rng(seed)
    pts = []
    flags = []
    n = 0
    while n < density:
        u, v = rng.random(), rng.random()
        d = math.acosh(1.0 + (math.cosh(radius) - 1.0) * u)
        ang = 2.0 * math.pi * v
        # walk distance d from the apex, then recenter at the basepoint
        p = np.array([math.sinh(d) * math.cos(ang), math.sinh(d) * math.sin(ang), math.cosh(d)])
        p = _transport_to(basepoint) @ p
        flag = False
        for _ in range(50):
            if all(abs(inner(leaf.normal, p)) > 1e-7 for leaf, _ in leaves):
                break
            p = hyperboloid_normalize(p + np.array([1e-5, 2e-5, 0.0]))
            flag = True
        pts.append(p)
        flags.append(flag)
        n += 1
    pts = np.array(pts)

    xvals = np.zeros((len(pts), 3))
    for leaf, w in leaves:
        s0 = float(inner(leaf.normal, basepoint))
        sp = pts @ (leaf.normal * np.array([1.0, 1.0, -1.0]))
        crossed = s0 * sp < 0
        orient = -np.sign(s0)  # away from the basepoint side
        xvals[crossed] += w * orient * leaf.normal
    return DevelopedSurfacePatch(rep, mc, basepoint, pts, xvals, flags)


def _transport_to(b):
    """A Lorentz boost carrying the apex to the hyperboloid point b."""
    b = np.asarray(b, dtype=float)
    x, y, t = b
    r2 = x * x + y * y
    if r2 < 1e-30:
        return np.eye(3)
    A = np.eye(3)
    A[0, 0] = 1.0 + x * x * (t - 1.0) / r2
    A[0, 1] = x * y * (t - 1.0) / r2
    A[1, 0] = A[0, 1]
    A[1, 1] = 1.0 + y * y * (t - 1.0) / r2
    A[0, 2] = x
    A[1, 2] = y
    A[2, 0] = x
    A[2, 1] = y
    A[2, 2] = t
    return A


def injectivity_gap(patch, max_pairs=20000, seed=1):
    """Minimum of <f(p')-f(q), f(p')-f(q)> over null-separated pairs.

    Hyperboloid points are mutually spacelike, so null pairs are built
    by scaling: p' = e^d p is null-separated from q when d = d_H2(p, q),
    and x is constant along rays so f(p') = e^d p + x(p).
    """
    m = len(patch)
    if m < 2:
        raise ValueError("need at least two samples")
    rng = np.random.default_rng(seed)
    gap = math.inf
    count = 0
    while count < max_pairs:
        i, j = rng.integers(0, m, size=2)
        if i == j:
            continue
        p, q = patch.points[i], patch.points[j]
        d = math.acosh(max(1.0, -float(inner(p, q))))
        if d < 1e-8:
            continue
        fp = math.exp(d) * p + patch.xvals[i]
        fq = q + patch.xvals[j]
        gap = min(gap, float(inner(fp - fq, fp - fq)))
        count += 1
    return gap


def graph_slope_check(patch):
    """Max |dt| / |(dx, dy)| over sampled pairs of developed points;
    below 1 exactly when the surface is the graph of a contraction."""
    f = patch.fvals
    worst = 0.0
    for i in range(len(f) - 1):
        d = f[i + 1:] - f[i]
        horiz = np.hypot(d[:, 0], d[:, 1])
        if np.any(horiz < 1e-12):
            raise ValueError("coincident horizontal projections")
        worst = max(worst, float(np.max(np.abs(d[:, 2]) / horiz)))
    return worst


class NullSupportPlane:
    """Half-space {<normal, y> >= offset} with null normal, oriented so
    the intersection over all planes is future-complete."""

    __slots__ = ("normal", "offset")

    def __init__(self, normal, offset):
        self.normal = np.asarray(normal, dtype=float)
        self.offset = float(offset)

    def contains(self, y, tol=0.0):
        return float(inner(self.normal, y)) >= self.offset - tol

    def slack(self, y):
        return float(inner(self.normal, y)) - self.offset


def support_planes(patch, count=64):
    """One null support plane per sampled null direction.

    For the future direction n(phi) = (cos phi, sin phi, 1) the domain
    lies in {<n, y> < max_r <n, x_r>} over the region translations x_r;
    stored with the normal negated so membership reads >= offset.
    """
    regions = patch.region_translations()
    out = []
    for k in range(count):
        phi = 2.0 * math.pi * k / count
        n = np.array([math.cos(phi), math.sin(phi), 1.0])
        c = max(float(inner(n, x)) for x in regions)
        out.append(NullSupportPlane(-n, -c))
    return out


class CyclicSingularitySegment:
    """Spacelike segment of base points of the null boundary rays of a
    cyclic spacetime."""

    def __init__(self, r, q):
        self.r = np.asarray(r, dtype=float)
        self.q = np.asarray(q, dtype=float)

    @property
    def length(self):
        d = self.q - self.r
        s = float(inner(d, d))
        if s < 0:
            raise ValueError("segment is not spacelike")
        return math.sqrt(s)


def cyclic_initial_singularity(lam_, weight):
    """Initial singularity of the cyclic spacetime of boost T(lam) with
    its axis weighted: the segment between the base region's translation
    (zero) and the far region's translation across the leaf."""
    if lam_ <= 0 or weight < 0:
        raise ValueError("need lam > 0 and weight >= 0")
    if weight == 0:
        return CyclicSingularitySegment(np.zeros(3), np.zeros(3))
    return CyclicSingularitySegment(np.zeros(3), cyclic_boost_cocycle(lam_, weight))


class StandardTorusSpacetime:
    """Quotient data of {t^2 > x^2, t > 0} by two commuting isometries
    A = (T(lam), (0,e,0)) and B = (T(mu), (0,f,0))."""

    def __init__(self, lam_, e, mu, f):
        if abs(lam_ * f - mu * e) < 1e-12:
            raise ValueError("(lam, e) and (mu, f) must be independent")
        self.lam = float(lam_)
        self.e = float(e)
        self.mu = float(mu)
        self.f = float(f)
        self.A = LorentzIsometry(boost_y_axis(lam_), np.array([0.0, e, 0.0]))
        self.B = LorentzIsometry(boost_y_axis(mu), np.array([0.0, f, 0.0]))

    @staticmethod
    def contains(p):
        p = np.asarray(p, dtype=float)
        return p[2] > 0 and p[2] * p[2] > p[0] * p[0]


def standard_torus(lam_, e, mu, f):
    return StandardTorusSpacetime(lam_, e, mu, f)
