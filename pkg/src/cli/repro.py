"""
Worked examples bundled with the `repro` command
Each item recomputes a published count or type from scratch and reports PASS/FAIL.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Dict, List

from src.core.exceptions import ChordlabError
from src.diagrams.core import Mode, make_type, validate_type
from src.diagrams.enumerator import Census, EnumerationSpec, census, harer_zagier

logger = logging.getLogger(__name__)


@dataclass
class ReproItem:
    label: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.label} : {status}" + (f" ({self.detail})" if self.detail and not self.passed else "")


def n_polynomial(result: Census) -> Dict[int, int]:
    """Gaussian average summed over spectra: power of N -> coefficient"""
    powers: Counter = Counter()
    for t, count in result.entries.items():
        powers[-t.x_exponent] += count
    return dict(sorted(powers.items(), reverse=True))


def _genus_one_surface_type() -> ReproItem:
    t = make_type(
        Mode.ORIENTED,
        euler_genus=1,
        k=6,
        l=2,
        backbone_spectrum={6: 1, 8: 1},
        point_spectrum={0: 2, 1: 2},
        length_spectrum={1: 1, 2: 2, 9: 1},
        lp_spectrum={(1,): 1, (0, 0): 2, (0, 0, 0, 0, 0, 0, 1, 0, 0): 1},
    )
    try:
        validate_type(t)
    except ChordlabError as e:
        return ReproItem("type {1,6,2; b_6=1,b_8=1} satisfies every sum rule", False, str(e))
    return ReproItem("type {1,6,2; b_6=1,b_8=1} satisfies every sum rule", True)


def _moment(label: str, length: int, expected: Dict[int, int], mode: Mode = Mode.ORIENTED) -> Callable[[], ReproItem]:
    def item() -> ReproItem:
        got = n_polynomial(census(EnumerationSpec((length,), length // 2, mode)))
        return ReproItem(label, got == expected, f"got {got}")

    return item


def _point_types_of_one_chord() -> ReproItem:
    marginal = census(EnumerationSpec((4,), 1)).marginal("point")
    types = {key for (_, _, _, key) in marginal}
    expected = {((0, 1), (2, 1)), ((1, 2),)}
    total = sum(marginal.values())
    label = "b_4=1, k=1 realizes exactly {n_0=1,n_2=1} and {n_1=2}"
    return ReproItem(label, types == expected and total == 6, f"types {sorted(types)}, total {total}")


def _harer_zagier(k_max: int = 4) -> ReproItem:
    reference = harer_zagier(k_max)
    for k in range(1, k_max + 1):
        got = census(EnumerationSpec((2 * k,), k)).genus_counts()
        want = {g: count for (g, kk), count in reference.items() if kk == k}
        if got != want:
            return ReproItem(f"genus census agrees with Harer-Zagier for k<={k_max}", False, f"k={k}: {got} != {want}")
    return ReproItem(f"genus census agrees with Harer-Zagier for k<={k_max}", True)


REPRO_ITEMS: List[Callable[[], ReproItem]] = [
    _genus_one_surface_type,
    _moment("⟨N Tr M⁴⟩ = 2N²+1", 4, {2: 2, 0: 1}),
    _point_types_of_one_chord,
    _moment("⟨N Tr M⁶⟩ = 5N²+10", 6, {2: 5, 0: 10}),
    _moment("⟨N Tr M²⟩ real symmetric = N²+N", 2, {2: 1, 1: 1}, Mode.NON_ORIENTED),
    _harer_zagier,
]


def run_repro() -> List[ReproItem]:
    results = []
    for make_item in REPRO_ITEMS:
        result = make_item()
        logger.info("repro %s: %s", result.label, "PASS" if result.passed else "FAIL")
        results.append(result)
    return results
