"""Certify or refute F-tightness three ways and cross-check the answers.

* direct: every induced map H_q(K_J) -> H_q(K) is injective.
* lemma identity: beta_q(K) = beta_q(K_J) + beta_{n-q}(K_{J^c}) for all J, q.
* theorem A: beta(Z_K) = 2^(m-1) (beta(K) - 2) + 2.

The last two need K to be an orientable closed homology manifold over GF(p).
"""

from dataclasses import dataclass, field

from .complex_core import full_mask, members
from .errors import InternalInconsistency, NotAManifold, NotOrientable
from .field_linalg import check_prime, kernel_basis, matmul
from .hochster import all_subcomplex_betti, beta_zk_total, theorem_a_bound
from .homology import SubcomplexHomology, betti_numbers, is_closed_homology_manifold, is_F_orientable

TIGHT = "TIGHT"
NOT_TIGHT = "NOT_TIGHT"

DIRECT = "DIRECT"
LEMMA_IDENTITY = "LEMMA_IDENTITY"
THEOREM_A = "THEOREM_A"
ALL = "ALL"


@dataclass
class Witness:
    J: int
    q: int
    nullity: int
    # chains on K_J: list of (1-based face, coefficient)
    kernel_cycle: list = field(default_factory=list)

    def to_dict(self):
        return {
            "J": members(self.J),
            "q": self.q,
            "nullity": self.nullity,
            "kernel_cycle": [{"face": f, "coeff": c} for f, c in self.kernel_cycle],
        }


@dataclass
class TightnessReport:
    verdict: str
    method: str
    p: int
    witnesses: list = field(default_factory=list)
    bound_lhs: int = None
    bound_rhs: int = None
    violations: list = field(default_factory=list)
    methods: dict = field(default_factory=dict)

    @property
    def tight(self):
        return self.verdict == TIGHT

    def to_dict(self):
        return {
            "verdict": self.verdict,
            "method": self.method,
            "p": self.p,
            "methods": dict(sorted(self.methods.items())),
            "bound": {"lhs": self.bound_lhs, "rhs": self.bound_rhs},
            "witnesses": [w.to_dict() for w in self.witnesses],
            "violations": [{"J": members(J), "q": q} for J, q in self.violations],
        }


def require_manifold(K, p):
    """Raise unless K is an F-orientable closed homology manifold; return n."""
    if not is_closed_homology_manifold(K, p):
        raise NotAManifold(f"not a closed homology manifold over GF({p})")
    if not is_F_orientable(K, p):
        raise NotOrientable(f"not GF({p})-orientable")
    return K.dim


def _bound(K, p, cache):
    beta_K = betti_numbers(K, p).total
    return beta_zk_total(cache), theorem_a_bound(K.m, beta_K)


def nullities(K, p, cache=None, engine=None):
    """``{(J, q): (nullity, kernel vectors)}`` for every nonzero H_q(K_J)."""
    engine = engine or SubcomplexHomology(K, p)
    cache = cache or all_subcomplex_betti(K, p)
    top = full_mask(K.m)
    out = {}
    for J in range(1 << K.m):
        for q in range(K.dim + 1):
            if cache.unreduced_degree(J, q) == 0:
                continue
            M = engine.induced(J, top, q)
            ker = kernel_basis(M, p)
            out[(J, q)] = (ker.shape[1], ker)
    return out


def direct_check(K, p, cache=None, engine=None):
    p = check_prime(p)
    engine = engine or SubcomplexHomology(K, p)
    cache = cache or all_subcomplex_betti(K, p)
    witnesses = []
    for (J, q), (null, ker) in sorted(nullities(K, p, cache, engine).items()):
        if null:
            basis = engine.basis(J, q)
            chain = matmul(basis.representatives, ker[:, :1], p)[:, 0]
            witnesses.append(Witness(J, q, null, engine.chain_to_faces(J, q, chain)))
    lhs, rhs = _bound(K, p, cache)
    verdict = NOT_TIGHT if witnesses else TIGHT
    return TightnessReport(verdict, DIRECT, p, witnesses, lhs, rhs, methods={DIRECT: verdict})


def lemma_identity_check(K, p, cache=None):
    p = check_prime(p)
    n = require_manifold(K, p)
    cache = cache or all_subcomplex_betti(K, p)
    top = full_mask(K.m)
    beta_K = betti_numbers(K, p)
    violations = []
    for J in range(1 << K.m):
        Jc = top & ~J
        for q in range(n + 1):
            if beta_K[q] != cache.unreduced_degree(J, q) + cache.unreduced_degree(Jc, n - q):
                violations.append((J, q))
    lhs, rhs = _bound(K, p, cache)
    verdict = NOT_TIGHT if violations else TIGHT
    return TightnessReport(verdict, LEMMA_IDENTITY, p, bound_lhs=lhs, bound_rhs=rhs,
                           violations=violations, methods={LEMMA_IDENTITY: verdict})


def theorem_a_check(K, p, cache=None):
    p = check_prime(p)
    require_manifold(K, p)
    cache = cache or all_subcomplex_betti(K, p)
    lhs, rhs = _bound(K, p, cache)
    if lhs < rhs:
        raise InternalInconsistency(f"beta(Z_K)={lhs} below the lower bound {rhs}")
    verdict = TIGHT if lhs == rhs else NOT_TIGHT
    return TightnessReport(verdict, THEOREM_A, p, bound_lhs=lhs, bound_rhs=rhs,
                           methods={THEOREM_A: verdict})


def check_all(K, p, cache=None, engine=None):
    """Run every applicable method; gated methods are recorded as skipped."""
    p = check_prime(p)
    cache = cache or all_subcomplex_betti(K, p)
    engine = engine or SubcomplexHomology(K, p)
    report = direct_check(K, p, cache, engine)
    methods = {DIRECT: report.verdict}
    for name, fn in ((LEMMA_IDENTITY, lemma_identity_check), (THEOREM_A, theorem_a_check)):
        try:
            sub = fn(K, p, cache)
        except (NotAManifold, NotOrientable) as exc:
            methods[name] = f"SKIPPED({type(exc).__name__})"
            continue
        methods[name] = sub.verdict
        if name == LEMMA_IDENTITY:
            report.violations = sub.violations
    verdicts = {v for v in methods.values() if not v.startswith("SKIPPED")}
    if len(verdicts) != 1:
        raise InternalInconsistency(f"tightness methods disagree: {methods}")
    report.method = ALL
    report.methods = methods
    return report


def rank_identity_defects(K, p, cache=None, engine=None):
    """(J, q) where beta_q(K) != beta_q(K_J) + beta_{n-q}(K_{J^c}) - null i_q(J) - null i_{q-1}(J).

    Checked for q in 0..n+1.  Empty for every orientable homology manifold.
    """
    n = require_manifold(K, p)
    cache = cache or all_subcomplex_betti(K, p)
    engine = engine or SubcomplexHomology(K, p)
    null = {key: v[0] for key, v in nullities(K, p, cache, engine).items()}
    beta_K = betti_numbers(K, p)
    top = full_mask(K.m)
    bad = []
    for J in range(1 << K.m):
        Jc = top & ~J
        for q in range(n + 2):
            rhs = (cache.unreduced_degree(J, q) + cache.unreduced_degree(Jc, n - q)
                   - null.get((J, q), 0) - null.get((J, q - 1), 0))
            if beta_K[q] != rhs:
                bad.append((J, q))
    return bad
