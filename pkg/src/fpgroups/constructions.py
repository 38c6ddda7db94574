"""Pipelines that assemble subgroup pairs ``A ↪ G`` from a seed group Q.

Every pipeline checks what it can (H₁, bounded finite quotients, C'(1/6),
quotient recovery) and records the rest with an honest status: hypotheses the
caller vouches for are ``asserted``, consequences of published theorems are
``theorem-cited``.  Profinite statements are never computed, so they are never
``certified``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Optional

from .certificates import (
    ASSERTED,
    CERTIFIED,
    REFUTED,
    STATUSES,
    UNKNOWN,
    Certificate,
    asserted,
    cited,
)
from .coset_enum import EnumerationLimits, ResourceExhausted, certify_no_finite_quotients, todd_coxeter
from .homology import generates_abelianization, h1
from .presentations import (
    MarkedSubgroup,
    Presentation,
    digest,
    direct_product,
    parse_presentation,
    presentation_to_json,
    tietze_simplify,
)
from .rips import RipsOutput, RipsParameters, rips_wise
from .small_cancellation import SIXTH, dehn_solver, sc_verify
from .words import Word, format_word, substitute

YES, NO, MAYBE = "yes", "no", "unknown"

# a nontriviality oracle answers True (certainly non-trivial) or None (no idea)
Oracle = Callable[[Presentation], Optional[bool]]


class HypothesisRefuted(RuntimeError):
    """One or more hypotheses of a pipeline failed a machine check.

    ``hypothesis`` names the first failure; ``hypotheses`` and
    ``certificates`` list every failed check with its refuting evidence.
    """

    def __init__(self, failures: list[Certificate], message: str = ""):
        names = [c.name for c in failures]
        super().__init__(message or f"hypotheses refuted: {', '.join(names)}")
        self.hypotheses = names
        self.hypothesis = names[0]
        self.certificates = failures
        self.certificate = failures[0]

    def to_json(self) -> dict:
        return {
            "status": REFUTED,
            "hypothesis": self.hypothesis,
            "hypotheses": self.hypotheses,
            "message": str(self),
            "certificates": [c.to_json() for c in self.certificates],
        }


class PreconditionRefuted(ValueError):
    pass


# ------------------------------------------------------------------ seeds


_HIGMAN = {
    "corrected": "<a,b,c,d | a*b*a^-1 = b^2, b*c*b^-1 = c^2, c*d*c^-1 = d^2, d*a*d^-1 = a^2>",
    # last relation as often misprinted; it forces a = d^2 and the group collapses
    "paper-verbatim": "<a,b,c,d | a*b*a^-1 = b^2, b*c*b^-1 = c^2, c*d*c^-1 = d^2, d*a*d^-1 = d^2>",
}


def higman(variant: str = "corrected") -> Presentation:
    """Higman's 4-generator group with no non-trivial finite quotients."""
    try:
        text = _HIGMAN[variant]
    except KeyError:
        raise ValueError(f"unknown Higman variant {variant!r}; use one of {sorted(_HIGMAN)}") from None
    p = parse_presentation(text)
    p.metadata["name"] = f"higman-{variant}"
    return p


def higman_citation_oracle(p: Presentation) -> Optional[bool]:
    """Knows exactly one non-trivial group: Higman's (it is infinite).

    This is a lookup, not a computation: it answers True only for a
    presentation whose canonical digest equals the corrected Higman one.
    """
    return True if digest(p) == digest(higman("corrected")) else None


def dehn_oracle(p: Presentation) -> Optional[bool]:
    """Non-trivial if ``p`` is C'(1/6) and some generator is Dehn-irreducible."""
    if not p.generators or not sc_verify(p, SIXTH).passes_sixth:
        return None
    solver = dehn_solver(p)
    return True if any(not solver.is_trivial(Word.gen(x)) for x in p.generators) else None


@dataclass
class SeedSequence:
    """A recursive sequence of presentations ``n -> Q_n``."""

    provider: Callable[[int], Presentation]
    description: str
    nontriviality_oracle: Optional[Oracle] = None

    def __call__(self, n: int) -> Presentation:
        return self.provider(n)


def constant_higman() -> SeedSequence:
    return SeedSequence(lambda n: higman("corrected"), "constant Higman group (corrected)", higman_citation_oracle)


def constant_trivial() -> SeedSequence:
    return SeedSequence(lambda n: parse_presentation("<a | a>"), "constant trivial group <a | a>", dehn_oracle)


BUILTIN_SEEDS = {"higman": constant_higman, "trivial": constant_trivial}


# ---------------------------------------------------------------- reports


@dataclass
class PairReport:
    g: Presentation
    a: MarkedSubgroup
    b: Optional[MarkedSubgroup] = None
    certificates: list[Certificate] = field(default_factory=list)
    profinite_claims: list[Certificate] = field(default_factory=list)
    direct_factor: str = MAYBE
    extra: dict = field(default_factory=dict)
    rips: Optional[RipsOutput] = None

    def certificate(self, name: str) -> Certificate:
        for c in self.certificates + self.profinite_claims:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        out = {
            "status": "ok",
            "g": presentation_to_json(self.g),
            "a": self.a.to_json(),
            "b": self.b.to_json() if self.b is not None else None,
            "certificates": [c.to_json() for c in self.certificates],
            "profinite_claims": [c.to_json() for c in self.profinite_claims],
            "direct_factor": self.direct_factor,
        }
        if self.extra:
            out["extra"] = self.extra
        return out


def verify_report(report: PairReport) -> list[str]:
    """Hygiene problems in a report; an empty list means it is clean."""
    problems = []
    for c in report.profinite_claims:
        if c.status == CERTIFIED:
            problems.append(f"profinite claim {c.name!r} is marked certified")
        if c.status not in (ASSERTED, "theorem-cited"):
            problems.append(f"profinite claim {c.name!r} has status {c.status!r}")
    for c in report.certificates + report.profinite_claims:
        if c.status not in STATUSES:
            problems.append(f"{c.name!r}: bad status {c.status!r}")
        if not isinstance(c.bound, int) or c.bound < 0:
            problems.append(f"{c.name!r}: missing bound")
        if not c.input_digest.startswith("sha256:"):
            problems.append(f"{c.name!r}: missing input digest")
        if not c.name:
            problems.append(f"certificate without a name: {c.claim!r}")
    if report.direct_factor not in (YES, NO, MAYBE):
        problems.append(f"direct_factor is {report.direct_factor!r}")
    return problems


# -------------------------------------------------------------- pipelines


def _timed(fn, *args, **kwargs):
    t0 = time.monotonic()
    out = fn(*args, **kwargs)
    return out, int(1000 * (time.monotonic() - t0))


def check_hypotheses(
    q: Presentation,
    bound: int,
    limits: EnumerationLimits | None = None,
    h2_vanishes: bool = True,
) -> list[Certificate]:
    """Perfectness (certified or refuted), no quotients up to ``bound``, H₂ flag."""
    qd = digest(q)
    inv, ms = _timed(h1, q)
    h1_cert = Certificate(
        "H1(Q) = 0", CERTIFIED if inv.trivial else REFUTED, evidence={"h1": str(inv)},
        input_digest=qd, strategy="Smith normal form of the exponent-sum matrix", runtime_ms=ms, name="h1-trivial",
    )
    fq = certify_no_finite_quotients(q, bound, limits)
    failed = [c for c in (h1_cert, fq) if c.status == REFUTED]
    if failed:
        reasons = []
        if not inv.trivial:
            reasons.append(f"Q is not perfect: H1(Q) = {inv}")
        if fq.status == REFUTED:
            reasons.append(f"Q has a subgroup of index {fq.evidence['witness']['index']}")
        raise HypothesisRefuted(failed, "; ".join(reasons))
    return [h1_cert, fq, asserted("h2-trivial", "H2(Q, Z) = 0", "h2_vanishes" if h2_vanishes else "h2_unchecked", qd)]


def check_infinite(q: Presentation, max_cosets: int = 20_000) -> Certificate:
    """"Q is infinite": refuted if enumerating the cosets of 1 closes, else asserted."""
    qd = digest(q)
    t0 = time.monotonic()
    try:
        ct = todd_coxeter(q, (), EnumerationLimits(max_cosets=max_cosets, max_time=10.0))
    except ResourceExhausted as exc:
        ms = int(1000 * (time.monotonic() - t0))
        return Certificate(
            "Q is infinite", ASSERTED, bound=max_cosets, evidence={"flag": "q_infinite", "enumeration": str(exc)},
            input_digest=qd, strategy="Todd-Coxeter over the trivial subgroup", runtime_ms=ms, name="q-infinite",
        )
    ms = int(1000 * (time.monotonic() - t0))
    return Certificate(
        "Q is infinite", REFUTED, bound=max_cosets, evidence={"order": ct.index, "table": ct.to_json()},
        input_digest=qd, strategy="Todd-Coxeter over the trivial subgroup", runtime_ms=ms, name="q-infinite",
    )


def theorem_main_pipeline(
    q: Presentation,
    bound: int = 6,
    rips_params: RipsParameters | None = None,
    h2_vanishes: bool = True,
    limits: EnumerationLimits | None = None,
    finiteness_cosets: int = 20_000,
) -> PairReport:
    """Γ with a finitely generated normal subgroup N whose profinite completion maps onto Γ̂.

    Nothing is built unless H₁(Q) = 0 and no finite quotient of order
    ≤ ``bound`` is found; failures raise :class:`HypothesisRefuted`.
    """
    certs = check_hypotheses(q, bound, limits, h2_vanishes)
    fin = check_infinite(q, finiteness_cosets)
    if fin.status == REFUTED:
        raise HypothesisRefuted([fin], f"Q is finite of order {fin.evidence['order']}")
    certs.append(fin)
    out = rips_wise(q, rips_params)
    gd = digest(out.gamma)
    certs.extend(out.certificates)
    claims = [
        cited(
            "profinite-iso",
            "the inclusion N -> Gamma induces an isomorphism of profinite completions",
            "Platonov-Tavgen criterion (perfect Q with H2 = 0 and no finite quotients) with the Rips-Wise construction;"
            " conditional on the asserted hypotheses",
            gd,
        ),
        cited("n-not-fp", "N is not finitely presentable", "Bieri: f.p. normal subgroups of cd-2 groups", gd),
    ]
    certs.append(cited("n-not-direct-factor", "N is not a direct factor of Gamma", "direct factors of f.p. groups are f.p.", gd))
    return PairReport(out.gamma, out.n_subgroup, None, certs, claims, NO, {"q": presentation_to_json(q)}, out)


def goldstein_guralnick_pair(
    q: Presentation,
    b: Presentation,
    bound: int = 6,
    rips_params: RipsParameters | None = None,
    h2_vanishes: bool = True,
    limits: EnumerationLimits | None = None,
    finiteness_cosets: int = 20_000,
) -> PairReport:
    """``G = Γ × B`` with ``A = N × 1``; A is not a direct factor but Ĝ = Ā × B̂."""
    base = theorem_main_pipeline(q, bound, rips_params, h2_vanishes, limits, finiteness_cosets)
    gamma = base.g
    g = direct_product(gamma, b)
    renamed = g.metadata["renamed"]
    gd = digest(g)
    a = MarkedSubgroup(g, tuple(Word.gen(n) for n in base.rips.nu), "A")
    bsub = MarkedSubgroup(g, tuple(Word.gen(renamed.get(x, x)) for x in b.generators), "B")
    certs = list(base.certificates)
    certs.append(
        Certificate(
            "G has |X(Gamma)| + |X(B)| generators and |R(Gamma)| + |R(B)| + |X(Gamma)||X(B)| relators",
            CERTIFIED if (g.rank, len(g.relators)) == (gamma.rank + b.rank, len(gamma.relators) + len(b.relators) + gamma.rank * b.rank) else REFUTED,
            evidence={"generators": g.rank, "relators": len(g.relators)}, input_digest=gd, strategy="count", name="g-counts",
        )
    )
    certs.append(asserted("b-residually-finite", "B is finitely presented and residually finite", "b_residually_finite", digest(b)))
    claims = base.profinite_claims + [
        cited(
            "profinite-product",
            "the profinite completion of G is Gamma^ x B^ = closure(A) x B^",
            "profinite completion commutes with finite direct products; N^ -> Gamma^ is an isomorphism",
            gd,
        ),
        cited(
            "a-not-direct-factor",
            "A is not a direct factor of G",
            "a direct factor of a finitely presented group is finitely presentable, and N is not",
            gd,
        ),
    ]
    return PairReport(g, a, bsub, certs, claims, NO, {"gamma_digest": digest(gamma)}, base.rips)


def _project(w: Word, keep: set[str], rename: dict[str, str] | None = None) -> Word:
    rename = rename or {}
    return Word([(rename.get(x, x), e) for x, e in w if x in keep])


def fibre_product_generators(rips_out: RipsOutput) -> MarkedSubgroup:
    """Generators of ``P = {(γ₁, γ₂) : π(γ₁) = π(γ₂)} = (N × 1)·Δ(Γ)`` inside ``Γ × Γ``."""
    gamma = rips_out.gamma
    amb = direct_product(gamma, gamma)
    renamed = amb.metadata["renamed"]
    words = [Word.gen(n) for n in rips_out.nu]
    words += [Word.gen(x) * Word.gen(renamed[x]) for x in gamma.generators]
    kill_nu = {x: Word() if x in rips_out.nu else Word.gen(x) for x in gamma.generators}
    back = {v: k for k, v in renamed.items()}
    first, second = set(gamma.generators), set(renamed.values())

    def balanced(w: Word) -> bool:
        left = substitute(_project(w, first), kill_nu)
        right = substitute(_project(w, second, back), kill_nu)
        return left == right

    checks = [balanced(w) for w in words]
    gd = digest(amb)
    meta = {
        "balanced": all(checks),
        "certificates": [
            Certificate(
                "every marked generator (g1, g2) satisfies pi(g1) = pi(g2)",
                CERTIFIED if all(checks) else REFUTED, evidence={"per_generator": checks},
                input_digest=gd, strategy="substitute nu -> 1 in both factors", name="fibre-balanced",
            ).to_json(),
            asserted("k-q-1-finite-3-skeleton", "Q has a K(Q,1) with finite 3-skeleton", "kq1_finite_3_skeleton", digest(rips_out.q_input)).to_json(),
            cited(
                "p-finitely-presented", "P is finitely presented",
                "the 1-2-3 theorem for fibre products; conditional on the asserted K(Q,1) hypothesis", gd,
            ).to_json(),
        ],
    }
    return MarkedSubgroup(amb, tuple(words), "P", meta)


# a word-problem oracle answers True (non-trivial), False (trivial) or None
WordOracle = Callable[[Presentation, Word], Optional[bool]]


def nikolov_segal_subgroup(rips_out: RipsOutput, gamma_word: Word, oracle: Optional[WordOracle] = None) -> MarkedSubgroup:
    """``⟨N, γ⟩ ≅ N ⋊ ℤ`` where γ acts on N by an automorphism no power of which is inner.

    ``π(γ)`` (γ with the ν's deleted) must be non-trivial in Q.  Free
    triviality is always refused; beyond that an oracle (by default Dehn's
    algorithm when Q is C'(1/6)) decides, otherwise non-triviality is asserted.
    """
    q = rips_out.q_input
    gamma = rips_out.gamma
    bad = gamma_word.symbols() - set(gamma.generators)
    if bad:
        raise PreconditionRefuted(f"word uses letters outside Gamma: {sorted(bad)}")
    image = substitute(gamma_word, {x: Word() if x in rips_out.nu else Word.gen(x) for x in gamma.generators})
    qd = digest(q)
    if not image:
        raise PreconditionRefuted(f"pi({format_word(gamma_word)}) is trivial: the word lies in N")
    status, strategy = ASSERTED, "caller flag"
    if oracle is not None:
        verdict = oracle(q, image)
        strategy = getattr(oracle, "__name__", "word-problem oracle")
    elif not q.relators:
        verdict, strategy = True, "Q is free and pi(gamma) is freely non-trivial"
    elif sc_verify(q, SIXTH).passes_sixth:
        verdict, strategy = not dehn_solver(q).is_trivial(image), "Dehn's algorithm in Q"
    else:
        verdict = None
    if verdict is False:
        raise PreconditionRefuted(f"pi({format_word(gamma_word)}) = {format_word(image)} is trivial in Q ({strategy})")
    if verdict:
        status = CERTIFIED
    pi_cert = Certificate(
        f"pi(gamma) = {format_word(image)} is non-trivial in Q", status,
        evidence={"pi_gamma": format_word(image)}, input_digest=qd,
        strategy=strategy, name="pi-gamma-nontrivial",
    )
    gd = digest(gamma)
    meta = {
        "structure": "N semidirect Z via conjugation by gamma (alpha)",
        "gamma": format_word(gamma_word),
        "certificates": [
            pi_cert.to_json(),
            asserted("q-torsion-free", "Q is torsion-free", "q_torsion_free", qd).to_json(),
            cited("gamma-torsion-free-hyperbolic", "Gamma is torsion-free and hyperbolic", "Rips-Wise theorem", gd).to_json(),
            cited(
                "semidirect",
                "<N, gamma> is N x| Z; no power of the automorphism alpha is inner, while alpha^ is inner on N^",
                "torsion-free hyperbolic centralisers are cyclic; N^ = Gamma^", gd,
            ).to_json(),
        ],
    }
    gens = tuple(Word.gen(n) for n in rips_out.nu) + (gamma_word,)
    return MarkedSubgroup(gamma, gens, "N.gamma", meta)


def direct_factor_verdict(q: Presentation, tietze_budget: int, oracle: Optional[Oracle] = None) -> tuple[str, str]:
    """Three-valued answer to "is A_n a direct factor of G_n", i.e. "is Q_n trivial".

    ``yes`` when Tietze moves (at most ``tietze_budget``) eliminate every
    generator of Q_n; ``no`` when the oracle vouches Q_n is non-trivial;
    ``unknown`` otherwise.  Raising the budget can only turn ``unknown`` into
    an answer: the moves are deterministic, so a smaller budget runs a prefix.
    """
    simplified = tietze_simplify(q, max_moves=tietze_budget)
    if not simplified.generators:
        return YES, f"seed Tietze-trivializes in {simplified.metadata['tietze_moves']} moves"
    if oracle is not None and oracle(q):
        return NO, f"seed certified non-trivial by {getattr(oracle, '__name__', 'oracle')}"
    return MAYBE, f"seed not trivialized within {tietze_budget} moves and no oracle verdict"


def gn_family(
    seed: SeedSequence,
    n: int,
    bound: int = 6,
    rips_params: RipsParameters | None = None,
    tietze_budget: int = 1000,
    use_oracle: bool = True,
    limits: EnumerationLimits | None = None,
) -> PairReport:
    """Member ``n`` of the family ``A_n ↪ G_n = Γ_n × ⟨t⟩``."""
    q = seed(n)
    certs = check_hypotheses(q, bound, limits)
    out = rips_wise(q, rips_params)
    certs.extend(out.certificates)
    gamma = out.gamma
    g = direct_product(gamma, Presentation(("t",), ()))
    t = g.metadata["factors"][1][0]
    gd = digest(g)
    a = MarkedSubgroup(g, tuple(Word.gen(x) for x in out.nu), "A_n")
    b = MarkedSubgroup(g, (Word.gen(t),), "B_n")
    expected = (gamma.rank + 1, len(gamma.relators) + gamma.rank)
    certs.append(
        Certificate(
            "G_n has |X|+4 generators and |S_n| + |X| + 3 relators", CERTIFIED if (g.rank, len(g.relators)) == expected else REFUTED,
            evidence={"generators": g.rank, "relators": len(g.relators)}, input_digest=gd, strategy="count", name="g-counts",
        )
    )
    spans = generates_abelianization(g, a.subgroup_generators + b.subgroup_generators + tuple(Word.gen(x) for x in q.generators))
    certs.append(
        Certificate(
            "A_n, B_n and the images of X generate H1(G_n)", CERTIFIED if spans else REFUTED,
            input_digest=gd, strategy="Smith normal form", name="abelian-generation",
        )
    )
    verdict, why = direct_factor_verdict(q, tietze_budget, seed.nontriviality_oracle if use_oracle else None)
    certs.append(
        Certificate(
            "A_n is a direct factor of G_n iff Q_n = 1", {YES: CERTIFIED, NO: CERTIFIED, MAYBE: UNKNOWN}[verdict],
            bound=tietze_budget, evidence={"verdict": verdict, "reason": why}, input_digest=digest(q),
            strategy="Tietze trivialization search / nontriviality oracle", name="direct-factor",
        )
    )
    certs += [
        cited("family-1", "G_n is residually finite and torsion-free", "Rips-Wise theorem; products with Z preserve both", gd),
        cited("family-4", "{n : A_n is a direct factor of G_n} is not recursive", "triviality of Q_n is undecidable for the seed sequence", gd),
        cited("family-5", "if A_n is not a direct factor of G_n, it is not one of any finite-index subgroup", "N_n is not finitely presentable", gd),
    ]
    claims = [
        cited("family-2", "B_n is infinite and G_n^ = closure(A_n) x closure(B_n)", "N_n^ -> Gamma_n^ is an isomorphism", gd),
        cited("family-3", "A_n -> G_n induces an isomorphism A_n^ -> closure(A_n)", "Platonov-Tavgen criterion via the Rips-Wise output", gd),
    ]
    extra = {
        "seed": seed.description,
        "n": n,
        "direct_factor_reason": why,
        "note": "A_n is a direct factor exactly when Q_n = 1, since then N_n = Gamma_n",
    }
    return PairReport(g, a, b, certs, claims, verdict, extra, out)
