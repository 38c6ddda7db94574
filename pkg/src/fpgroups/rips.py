"""Rips–Wise style construction: from ⟨X|R⟩ build ⟨X ∪ {ν₁,ν₂,ν₃} | S⟩ with
normal subgroup N = ⟨ν₁,ν₂,ν₃⟩ and Γ/N ≅ Q.

Relators:

* ``r_j · V_j^-1`` for every relator ``r_j`` of Q;
* ``x ν_i x^-1 · W⁺(x,i)^-1`` and ``x^-1 ν_i x · W⁻(x,i)^-1`` for every
  generator ``x`` and ``i = 1, 2, 3``;

where every block word is ``ν₁^k ν₂ ν₁^(k+1) ν₂ … ν₁^(k+c) ν₂ ν₃`` and the
exponent windows ``[k, k+c]`` of different block words are disjoint.  The
result is only accepted once :func:`sc_verify` certifies C'(1/6) and killing
the ν's gives back Q's relators; otherwise ``block_base`` is scaled up.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

from .certificates import CERTIFIED, Certificate, cited
from .presentations import (
    MarkedSubgroup,
    Presentation,
    digest,
    presentation_from_json,
    presentation_to_json,
    quotient_by,
    relator_set,
)
from .small_cancellation import SIXTH, CancellationReport, sc_verify
from .words import Word, parse_word


class ConstructionFailed(RuntimeError):
    def __init__(self, message: str, last_report: CancellationReport | None = None):
        super().__init__(message)
        self.last_report = last_report


class InvalidInput(ValueError):
    pass


@dataclass(frozen=True)
class RipsParameters:
    block_base: int = 10
    escalation_factor: int = 2
    max_rounds: int = 6
    block_runs: int = 16  # runs of ν₁ per block word, i.e. c + 1

    def __post_init__(self):
        if self.block_base < 10:
            raise ValueError("block_base must be at least 10")
        if self.escalation_factor < 2:
            raise ValueError("escalation_factor must be at least 2")
        if self.max_rounds < 1 or self.block_runs < 2:
            raise ValueError("max_rounds and block_runs must be positive")


@dataclass
class RipsOutput:
    gamma: Presentation
    n_subgroup: MarkedSubgroup
    q_input: Presentation
    params: RipsParameters
    sc_report: CancellationReport
    nu: tuple[str, str, str]
    block_base_used: int
    rounds: int
    certificates: list[Certificate] = field(default_factory=list)

    @property
    def metadata(self) -> dict:
        return {c.name: c.status for c in self.certificates}

    def to_json(self) -> dict:
        return {
            "q": presentation_to_json(self.q_input),
            "params": asdict(self.params),
            "block_base_used": self.block_base_used,
            "rounds": self.rounds,
            "nu": list(self.nu),
            "gamma": presentation_to_json(self.gamma),
            "n_subgroup": self.n_subgroup.to_json(),
            "sc_report": self.sc_report.to_json(include_per_relator=False),
            "certificates": [c.to_json() for c in self.certificates],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, obj: dict) -> "RipsOutput":
        gamma = presentation_from_json(obj["gamma"])
        nu = tuple(obj["nu"])
        sub = MarkedSubgroup(gamma, tuple(parse_word(s, gamma.generators) for s in obj["n_subgroup"]["generators"]), obj["n_subgroup"].get("label", "N"))
        return cls(
            gamma=gamma,
            n_subgroup=sub,
            q_input=presentation_from_json(obj["q"]),
            params=RipsParameters(**obj["params"]),
            sc_report=CancellationReport.from_json(obj["sc_report"]),
            nu=nu,  # type: ignore[arg-type]
            block_base_used=obj["block_base_used"],
            rounds=obj["rounds"],
            certificates=[Certificate.from_json(c) for c in obj.get("certificates", [])],
        )


def nu_names(q: Presentation) -> tuple[str, str, str]:
    taken = set(q.generators)
    names = []
    for i in (1, 2, 3):
        name = f"nu{i}"
        while name in taken:
            name += "_"
        taken.add(name)
        names.append(name)
    return tuple(names)  # type: ignore[return-value]


def block_word(k: int, runs: int, nu: tuple[str, str, str]) -> Word:
    """``ν₁^k ν₂ ν₁^(k+1) ν₂ … ν₁^(k+runs-1) ν₂ ν₃``."""
    n1, n2, n3 = nu
    letters = []
    for e in range(k, k + runs):
        letters.extend([(n1, 1)] * e)
        letters.append((n2, 1))
    letters.append((n3, 1))
    return Word(letters)


def build_gamma(q: Presentation, block_base: int, runs: int, nu: tuple[str, str, str]) -> tuple[Presentation, list[dict]]:
    """The presentation for one choice of ``block_base``; also returns the block-word layout."""
    layout = []
    relators = []
    window = block_base

    def next_block(role):
        nonlocal window
        w = block_word(window, runs, nu)
        layout.append({"role": role, "window": [window, window + runs - 1]})
        window += runs
        return w

    for j, r in enumerate(q.relators):
        relators.append(r * next_block(f"relator {j}").inverse())
    for x in q.generators:
        X = Word.gen(x)
        for i, n in enumerate(nu, start=1):
            N = Word.gen(n)
            relators.append(X * N * X.inverse() * next_block(f"{x} nu{i} {x}^-1").inverse())
            relators.append(X.inverse() * N * X * next_block(f"{x}^-1 nu{i} {x}").inverse())
    return Presentation(q.generators + nu, tuple(relators)), layout


def recovers_quotient(gamma: Presentation, q: Presentation, nu) -> bool:
    """Killing the ν's (eliminating only them) leaves exactly Q's relator set."""
    quo = quotient_by(gamma, [Word.gen(n) for n in nu], protect=q.generators)
    return tuple(quo.generators) == tuple(q.generators) and relator_set(quo) == relator_set(q)


def normality_rewrites(out: RipsOutput) -> list[tuple[Word, Word]]:
    """For every conjugate ``x^±1 ν_i x^∓1``, the ν-word it equals by a defining relator."""
    pairs = []
    offset = len(out.q_input.relators)
    rels = out.gamma.relators
    k = offset
    for x in out.q_input.generators:
        X = Word.gen(x)
        for n in out.nu:
            N = Word.gen(n)
            for conj in (X * N * X.inverse(), X.inverse() * N * X):
                r = rels[k]
                k += 1
                # r = conj * W^-1, so W = (conj^-1 * r)^-1
                pairs.append((conj, (conj.inverse() * r).inverse()))
    return pairs


def rips_wise(q: Presentation, params: RipsParameters | None = None) -> RipsOutput:
    """Build Γ and N for Q, escalating ``block_base`` until C'(1/6) is certified."""
    params = params or RipsParameters()
    if not q.generators:
        raise InvalidInput("Q must have at least one generator")
    nu = nu_names(q)
    qd = digest(q)
    last = None
    base = params.block_base
    for rnd in range(1, params.max_rounds + 1):
        gamma, layout = build_gamma(q, base, params.block_runs, nu)
        report = sc_verify(gamma, SIXTH)
        last = report
        if report.passes_sixth and recovers_quotient(gamma, q, nu):
            gamma.metadata["block_layout"] = layout
            gd = digest(gamma)
            certs = [
                Certificate(
                    "Gamma satisfies C'(1/6)", CERTIFIED, evidence={"lambda": str(report.lambda_), "witness": report.witness},
                    input_digest=gd, strategy="exact piece scan (suffix array)", name="small-cancellation",
                ),
                Certificate(
                    "killing nu1, nu2, nu3 recovers the relators of Q", CERTIFIED, evidence={"q_digest": qd},
                    input_digest=gd, strategy="Tietze elimination of the nu generators", name="quotient-recovery",
                ),
                Certificate(
                    "N = <nu1,nu2,nu3> is normal in Gamma", CERTIFIED,
                    evidence="every x^±1 nu_i x^∓1 equals a nu-word by a defining relator",
                    input_digest=gd, strategy="syntactic", name="n-normal",
                ),
                cited("hyperbolic", "Gamma is hyperbolic", "C'(1/6) groups are hyperbolic; Rips-Wise theorem", gd),
                cited("torsion-free", "Gamma is torsion-free", "Rips-Wise theorem", gd),
                cited("residually-finite", "Gamma is residually finite", "Wise's variant of the Rips construction", gd),
                cited("cd-2", "Gamma has cohomological dimension 2", "Rips-Wise theorem", gd),
                cited("n-not-free", "N is not free", "Rips-Wise theorem", gd),
            ]
            sub = MarkedSubgroup(gamma, tuple(Word.gen(n) for n in nu), "N")
            return RipsOutput(gamma, sub, q, params, report, nu, base, rnd, certs)
        base *= params.escalation_factor
    raise ConstructionFailed(
        f"C'(1/6) not reached after {params.max_rounds} rounds (last lambda {last.lambda_ if last else '?'})", last
    )

