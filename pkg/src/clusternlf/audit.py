"""Engine-level audits bundled by ``clusternlf verify-nlf``."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from clusternlf.bongartz import (
    LemmaReport,
    verify_lemma_case1,
    verify_lemma_case2,
    verify_lemma_case3,
)
from clusternlf.errors import SignCoherenceViolated
from clusternlf.graph import ExchangeGraph, check_axioms
from clusternlf.nlf import NlfReport, verify_nlf
from clusternlf.seed import ExchangeMatrix, Word, cmatrix, extend_word, transition_cmatrix


def sign_coherence_audit(B0: ExchangeMatrix, roots: Iterable[Word], targets: Iterable[Word]) -> LemmaReport:
    """Every C-matrix has sign-coherent nonzero columns and determinant +-1."""
    report = LemmaReport("sign-coherence")
    targets = list(targets)
    for s in roots:
        for t in targets:
            report.checked += 1
            C = cmatrix(B0, s, t)
            if not C.is_sign_coherent():
                report.violations.append({"root": list(s), "target": list(t), "C": C.tolist()})
            elif abs(C.det()) != 1:
                report.violations.append(
                    {"root": list(s), "target": list(t), "C": C.tolist(), "det": C.det()}
                )
    return report


def transition_audit(B0: ExchangeMatrix, roots: Iterable[Word], targets: Iterable[Word]) -> LemmaReport:
    """Row-k transition of C-matrices agrees with the recurrence from the new root."""
    report = LemmaReport("transition")
    targets = list(targets)
    for s in roots:
        for k in range(1, B0.n + 1):
            s2 = extend_word(s, k)
            for t in targets:
                report.checked += 1
                try:
                    got = transition_cmatrix(B0, s, k, t)
                except SignCoherenceViolated as exc:
                    report.violations.append({"root": list(s), "k": k, "target": list(t), "error": str(exc)})
                    continue
                want = cmatrix(B0, s2, t)
                if got != want:
                    report.violations.append(
                        {"root": list(s), "k": k, "target": list(t), "formula": got.tolist(), "recurrence": want.tolist()}
                    )
    return report


@dataclass
class FullAudit:
    nlf: NlfReport
    axioms: list[str] = field(default_factory=list)
    lemmas: list[LemmaReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.nlf.ok and not self.axioms and all(r.ok for r in self.lemmas)

    def to_json(self) -> dict:
        data = self.nlf.to_json()
        data["structural_problems"] = self.axioms
        data["checks"] = [r.to_json() for r in self.lemmas]
        data["ok"] = self.ok
        return data

    def summary(self) -> str:
        lines = [self.nlf.summary()]
        lines.append(f"structural problems: {len(self.axioms)}")
        for r in self.lemmas:
            lines.append(f"{r.name}: {r.checked} checked, {len(r.violations)} violations")
        lines.append("overall: " + ("PASS" if self.ok else "FAIL"))
        return "\n".join(lines)


def full_audit(g: ExchangeGraph, pair_budget: int, path_budget: int, workers: int = 1) -> FullAudit:
    nlf = verify_nlf(g, pair_budget, path_budget, workers)
    audit = FullAudit(nlf, check_axioms(g))
    witnesses = [g.witness(v) for v in range(len(g))]
    roots = [(w, v) for v, w in enumerate(witnesses)]
    audit.lemmas.append(sign_coherence_audit(g.matrix, witnesses, witnesses))
    audit.lemmas.append(transition_audit(g.matrix, witnesses, witnesses))
    audit.lemmas.append(verify_lemma_case1(g, roots))
    audit.lemmas.append(verify_lemma_case2(g, roots))
    case3 = LemmaReport("case-3")
    for U in g.sub_clusters():
        r = verify_lemma_case3(g, U)
        case3.checked += r.checked
        case3.violations.extend(r.violations)
    audit.lemmas.append(case3)
    return audit
