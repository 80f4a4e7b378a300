"""Builtin proof scripts, one per generating-set theorem.

Each script is produced as DSL text for a concrete genus and then parsed,
so ``Script.to_text`` round-trips to exactly what is listed here.  Steps
that are pure free-group cancellations (``XY^-1 * YZ^-1 = XZ^-1``) carry
no homological content and are omitted; every conjugation, curve-image
claim and closing generation claim is kept.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..surface import GenusModel
from ..words import Word, parse_word
from .steps import Script


class ScriptRangeError(ValueError):
    """The requested genus lies outside a theorem's range."""


@dataclass(frozen=True)
class Theorem:
    id: str
    title: str
    bound: int
    residues: tuple[int, ...]  # allowed g mod 4
    layout: str  # "rotation" or "reflection"
    generators: Callable[[int], list[str]]
    body: Callable[[int], str]
    level: str = "mod2"

    def applies(self, g: int) -> bool:
        return g >= self.bound and g % 4 in self.residues

    @property
    def range_text(self) -> str:
        forms = {
            (1, 3): "odd g", (0, 2): "even g",
            (0,): "g = 4k", (1,): "g = 4k+1", (2,): "g = 4k+2", (3,): "g = 4k+3",
            (0, 1, 2, 3): "g",
        }
        return f"{forms[self.residues]} >= {self.bound}"

    def model(self, g: int) -> GenusModel:
        return GenusModel(g, self.layout)

    def fits(self, model: GenusModel) -> bool:
        """In range, and the model's layout is this theorem's (the layouts agree for g = 0, 1 mod 4)."""
        return self.applies(model.g) and (model.layout == self.layout or model.residue in (0, 1))


def _k(g: int) -> int:
    return g // 4


def _wrap(i: int, n: int) -> int:
    """Reduce a 1-based family index into 1..n."""
    return (i - 1) % n + 1


def _gen_line(gens: list[str]) -> str:
    return "assert_gen [" + ", ".join(gens) + "] == omori"


# ---------------------------------------------------------------------------
# two-generator chains

def _t29_gens(g: int) -> list[str]:
    return ["T", "G10 * C2^-1 * F18 * C12^-1"]


def _t29(g: int) -> str:
    # T^4 sends c11 to the chain curve through x27 and x1, which is d1 at g = 27
    last = "D1" if g == 27 else "C13"
    return f"""\
def G1 = G10 * C2^-1 * F18 * C12^-1
assert_img T^-4 : gm10->gm6, c2->a1, f18->f14, c12->c10
def G2 = G6 * A1^-1 * F14 * C10^-1
assert_eq T^-4 * $G1 * T^4 == $G2
assert_img $G2 * $G1^-1 : gm6->c2, a1->a1, f14->f14, c10->c10
def G3 = C2 * A1^-1 * F14 * C10^-1
assert_eq $G2 * $G1^-1 * $G2 * $G1 * $G2^-1 == $G3
assert_eq $G2 * $G3^-1 == G6 * C2^-1
assert_eq T^4 * G6 * C2^-1 * T^-4 == G10 * C4^-1
def G4 = C4 * C2^-1 * F18 * C12^-1
assert_eq C4 * G10^-1 * $G1 == $G4
def G5 = B4 * B2^-1 * F17 * B12^-1
assert_eq T^-1 * $G4 * T == $G5
def G6 = B2 * A1^-1 * F14 * C10^-1
assert_eq $G4 * $G5 * $G3 * $G5^-1 * $G4^-1 == $G6
assert_eq $G3 * $G6^-1 == C2 * B2^-1
def G7 = C3 * C1^-1 * F16 * C11^-1
assert_eq T^-2 * $G4 * T^2 == $G7
def G8 = C5 * C3^-1 * F20 * {last}^-1
assert_eq T^4 * $G7 * T^-4 == $G8
def G9 = C5 * B4^-1 * F20 * {last}^-1
assert_eq $G7 * $G5 * $G8 * $G5^-1 * $G7^-1 == $G9
assert_eq $G8^-1 * $G9 == C3 * B4^-1
assert_eq T^-4 * B3 * B4^-1 * T^4 == B1 * B2^-1
def G10 = C3 * B2^-1 * F16 * C11^-1
assert_eq T^-4 * $G9 * T^4 == $G10
def G11 = C3 * C2^-1 * F16 * C11^-1
assert_eq $G10 * B2 * C2^-1 == $G11
def G12 = B2 * B1^-1 * F13 * B10^-1
assert_eq T^-3 * $G11 * T^3 == $G12
assert_eq T^5 * B1 * B2^-1 * $G12 * T^-5 == F18 * C12^-1
assert_eq $G1 * F18^-1 * C12 == G10 * C2^-1
assert_eq T^-2 * G10 * C2^-1 * T^2 == G8 * C1^-1
assert_eq T^-2 * C4 * C2^-1 * T^2 == C3 * C1^-1
assert_eq T^2 * C4 * C2^-1 * T^-2 == C5 * C3^-1
assert_eq T^-7 * G8 * B4^-1 * T^7 == G1 * A1^-1
assert_eq G1 == A2
assert_eq T^-17 * F18 * T^17 == F1
assert_eq A1 * F1 * A1^-1 == E
"""


def _t42_tail(X: str, g: int, n: int) -> str:
    """Steps shared by the D-family chain and its U-family twin.

    ``X`` is the family letter and ``n`` its index period.
    """
    x = lambda i: f"{X}{_wrap(i, n)}"  # noqa: E731
    return f"""\
assert_eq $H4^-1 * $H5 == {x(34)} * {x(33)}^-1
assert_eq T^-1 * {x(34)} * {x(33)}^-1 * T == {x(33)} * {x(32)}^-1
def H6 = G6 * A1^-1 * F14 * {x(33)}^-1
assert_eq T^-4 * $H1 * T^4 * {x(29)} * {x(33)}^-1 == $H6
def H7 = C2 * A1^-1 * F14 * {x(33)}^-1
assert_eq $H6 * $H1^-1 * $H6 * $H1 * $H6^-1 == $H7
assert_eq $H6 * $H7^-1 == G6 * C2^-1
assert_eq T^4 * G6 * C2^-1 * T^-4 == G10 * C4^-1
def H8 = C4 * C2^-1 * F18 * {x(33)}^-1
assert_eq C4 * G10^-1 * $H1 == $H8
def H9 = B4 * B2^-1 * F17 * {x(33)}^-1
assert_eq T^-1 * $H8 * T * {x(32)} * {x(33)}^-1 == $H9
def H10 = B2 * A1^-1 * F14 * {x(33)}^-1
assert_eq $H8 * $H9 * $H7 * $H9^-1 * $H8^-1 == $H10
assert_eq $H10 * $H7^-1 == B2 * C2^-1
assert_eq T * B2 * C2^-1 * T^-1 == C2 * B3^-1
assert_eq T^-2 * B2 * B3^-1 * T^2 == B1 * B2^-1
def H11 = C3 * C1^-1 * F16 * {x(33)}^-1
assert_eq T^-2 * $H8 * T^2 * {x(31)} * {x(33)}^-1 == $H11
def H12 = C5 * C3^-1 * F20 * {x(33)}^-1
assert_eq T^4 * $H11 * T^-4 * {x(37)} * {x(33)}^-1 == $H12
def H13 = C5 * B4^-1 * F20 * {x(33)}^-1
assert_eq $H11 * $H9 * $H12 * $H9^-1 * $H11^-1 == $H13
def H14 = C3 * B2^-1 * F16 * {x(33)}^-1
assert_eq T^-4 * $H13 * T^4 * {x(29)} * {x(33)}^-1 == $H14
def H15 = C2^-1 * C3 * F16 * {x(33)}^-1
assert_eq $H14 * B2 * C2^-1 == $H15
def H16 = B1^-1 * B2 * F13 * {x(33)}^-1
assert_eq T^-3 * $H15 * T^3 * {x(30)} * {x(33)}^-1 == $H16
assert_eq B1 * B2^-1 * $H16 == F13 * {x(33)}^-1
assert_eq T^5 * F13 * {x(33)}^-1 * T^-5 * {x(38)} * {x(33)}^-1 == F18 * {x(33)}^-1
assert_eq $H1 * F18^-1 * {x(33)} == G10 * C2^-1
assert_eq T^-2 * G10 * C2^-1 * T^2 == G8 * C1^-1
assert_eq T^2 * C4 * C2^-1 * T^-2 == C5 * C3^-1
assert_eq T^-7 * G8 * B4^-1 * T^7 == G1 * A1^-1
assert_eq G1 == A2
assert_img F18^-1 * {x(33)} * B16 : f18->f18, {x(33).lower()}->b16
assert_eq T^-17 * F18 * T^17 == F1
assert_eq A1 * F1 * A1^-1 == E
"""


def _t42_head(X: str, g: int, n: int, rest: str) -> str:
    x = lambda i: f"{X}{_wrap(i, n)}"  # noqa: E731
    return f"""\
def H1 = G10 * C2^-1 * F18 * {x(33)}^-1{rest}
def H2 = G21 * B8^-1 * F29 * {x(44)}^-1
assert_eq T^11 * $H1 * T^-11 == $H2
assert_img T^11 : gm10->gm21, c2->b8, f18->f29, {x(33).lower()}->{x(44).lower()}
def H3 = G21 * B8^-1 * F29 * {x(33)}^-1
assert_eq $H2 * $H1 * $H2 * $H1^-1 * $H2^-1 == $H3
def H4 = G22 * C8^-1 * F30 * {x(34)}^-1
assert_eq T * $H3 * T^-1 == $H4
def H5 = G22 * C8^-1 * F30 * {x(33)}^-1
assert_eq $H4 * $H1 * $H4 * $H1^-1 * $H4^-1 == $H5
"""


def _t42_gens(g: int) -> list[str]:
    return ["T", "G10 * C2^-1 * F18 * D33^-1"]


def _t42(g: int) -> str:
    n = g - 1
    return (
        _t42_head("D", g, n, "")
        + _t42_tail("D", g, n)
        + f"assert_img T^-33 : d33->d{g - 1}\n"
    )


# ---------------------------------------------------------------------------
# small-genus chains

def _t9odd_gens(g: int) -> list[str]:
    return ["T", "A1 * A2^-1", "F1 * B2^-1"]


def _t9odd(g: int) -> str:
    return f"""\
assert_img T^-3 : f1->f{g - 2}, b2->a1
assert_eq T^-3 * F1 * B2^-1 * T^3 == F{g - 2} * A1^-1
def M = A1 * F{g - 2}^-1 * F1 * B2^-1
assert_img $M : f{g - 2}->f{g - 2}, a1->f1
assert_eq $M * F{g - 2} * A1^-1 * $M^-1 == F{g - 2} * F1^-1
assert_img T^-2 : b2->b1, a2->gm{g - 1}
assert_eq T^-2 * B2 * A2^-1 * T^2 == B1 * G{g - 1}^-1
def N = A1 * B2^-1 * B1 * G{g - 1}^-1
assert_img $N : a1->b1, b2->b2
assert_eq $N * A1 * B2^-1 * $N^-1 == B1 * B2^-1
assert_eq A1 * F1 * A1^-1 == E
"""


def _t8even_gens(g: int) -> list[str]:
    return ["T", f"D{g - 1} * A2^-1", "F1 * B2^-1"]


def _t8even(g: int) -> str:
    return f"""\
assert_img T^-3 : f1->f{g - 3}, b2->a1
assert_eq T^-3 * F1 * B2^-1 * T^3 == F{g - 3} * A1^-1
def M1 = F{g - 3} * A1^-1 * D{g - 1} * A2^-1
assert_img $M1 : f{g - 3}->d{g - 1}, a1->a1
assert_eq $M1 * F{g - 3} * A1^-1 * $M1^-1 == D{g - 1} * A1^-1
def M2 = A1 * D{g - 1}^-1 * F1 * B2^-1
assert_img $M2 : a1->f1, d{g - 1}->d{g - 1}
assert_eq $M2 * A1 * D{g - 1}^-1 * $M2^-1 == F1 * D{g - 1}^-1
assert_img T^2 : a1->c1, b2->b3
assert_eq T^2 * A1 * B2^-1 * T^-2 == C1 * B3^-1
def M3 = C1 * B3^-1 * B2 * A1^-1
assert_img $M3 : b3->b3, c1->b2
assert_eq $M3 * C1 * B3^-1 * $M3^-1 == B2 * B3^-1
assert_eq T^-2 * B3 * B2^-1 * T^2 == B2 * B1^-1
assert_eq A1 * F1 * A1^-1 == E
"""


# ---------------------------------------------------------------------------
# reflection-layout chains

def _t4k2_gens(g: int) -> list[str]:
    k = _k(g)
    return ["T", f"G10 * C2^-1 * F18 * B{2 * k}^-1", f"C{2 * k - 1} * D{4 * k + 1}^-1"]


def _t4k2(g: int) -> str:
    k = _k(g)
    b, c, d = f"B{2 * k}", f"C{2 * k - 1}", f"D{4 * k + 1}"
    # K12 conjugates K11 (the element with C2^-1 C3), as in the D-family chain
    return f"""\
assert_img T : a1->b1, {b.lower()}->{b.lower()}, {d.lower()}->{d.lower()}
def K1 = G10 * C2^-1 * F18 * {b}^-1
def K2 = G6 * A1^-1 * F14 * {b}^-1
assert_eq T^-4 * $K1 * T^4 == $K2
def K3 = C2 * A1^-1 * F14 * {b}^-1
assert_eq $K2 * $K1^-1 * $K2 * $K1 * $K2^-1 == $K3
assert_eq $K2 * $K3^-1 == G6 * C2^-1
assert_eq T^4 * G6 * C2^-1 * T^-4 == G10 * C4^-1
def K4 = C4 * C2^-1 * F18 * {b}^-1
assert_eq C4 * G10^-1 * $K1 == $K4
def K5 = B4 * B2^-1 * F17 * {b}^-1
assert_eq T^-1 * $K4 * T == $K5
def K6 = B2 * A1^-1 * F14 * {b}^-1
assert_eq $K4 * $K5 * $K3 * $K5^-1 * $K4^-1 == $K6
assert_eq $K3 * $K6^-1 == C2 * B2^-1
assert_eq T * B2 * C2^-1 * T^-1 == C2 * B3^-1
assert_eq T^-2 * B2 * B3^-1 * T^2 == B1 * B2^-1
def K7 = C3 * C1^-1 * F16 * {b}^-1
assert_eq T^-2 * $K4 * T^2 == $K7
def K8 = C5 * C3^-1 * F20 * {b}^-1
assert_eq T^4 * $K7 * T^-4 == $K8
def K9 = C5 * B4^-1 * F20 * {b}^-1
assert_eq $K7 * $K5 * $K8 * $K5^-1 * $K7^-1 == $K9
def K10 = C3 * B2^-1 * F16 * {b}^-1
assert_eq T^-4 * $K9 * T^4 == $K10
def K11 = C2^-1 * C3 * F16 * {b}^-1
assert_eq $K10 * B2 * C2^-1 == $K11
def K12 = B1^-1 * B2 * F13 * {b}^-1
assert_eq T^-3 * $K11 * T^3 == $K12
assert_eq $K12 * B1 * B2^-1 == F13 * {b}^-1
assert_eq T^5 * F13 * {b}^-1 * T^-5 == F18 * {b}^-1
assert_eq $K1 * {b} * F18^-1 == G10 * C2^-1
assert_eq T^-2 * G10 * C2^-1 * T^2 == G8 * C1^-1
assert_eq T^-2 * C4 * C2^-1 * T^2 == C3 * C1^-1
assert_eq T^2 * C4 * C2^-1 * T^-2 == C5 * C3^-1
assert_eq T^-7 * G8 * B4^-1 * T^7 == A2 * A1^-1
assert_img {c} * {d}^-1 * B{2 * k - 1} : {c.lower()}->b{2 * k - 1}, {d.lower()}->{d.lower()}
assert_eq {c} * {d}^-1 * B{2 * k - 1} * {c} * {d}^-1 * B{2 * k - 1}^-1 * {d} * {c}^-1 == B{2 * k - 1} * {d}^-1
assert_img F18 * {b}^-1 * {d}^-1 : f18->f18, {b.lower()}->{d.lower()}
assert_eq T^-17 * F18 * T^17 == F1
assert_eq A1 * F1 * A1^-1 == E
"""


def _t4k3_gens(g: int) -> list[str]:
    k = _k(g)
    return ["T", "G10 * C2^-1 * F18 * U33^-1", f"B{2 * k + 1} * A1^-1"]


def _t4k3(g: int) -> str:
    k = _k(g)
    n = g - 2
    return (
        f"assert_img T : a1->b1, u{4 * k + 1}->u1, b{2 * k + 1}->b{2 * k + 1}\n"
        f"assert_eq U{4 * k + 1} == C{2 * k}\n"
        + _t42_head("U", g, n, "")
        + _t42_tail("U", g, n)
        + f"assert_eq T^{4 * k - 32} * U33 * T^{32 - 4 * k} == C{2 * k}\n"
    )


def _t4k2_10_gens(g: int) -> list[str]:
    k = _k(g)
    return ["T", "A1 * A2^-1", f"F1 * B{2 * k}^-1", f"C{2 * k - 1} * D{4 * k + 1}^-1"]


def _t4k2_10(g: int) -> str:
    k = _k(g)
    b, c, d = f"B{2 * k}", f"C{2 * k - 1}", f"D{4 * k + 1}"
    return f"""\
assert_img T^3 : f1->f4, {b.lower()}->{b.lower()}
assert_eq T^3 * F1 * {b}^-1 * T^-3 == F4 * {b}^-1
def M1 = A1 * A2^-1 * {b} * F4^-1
assert_img $M1 : a1->a1, a2->f4
assert_eq $M1 * A1 * A2^-1 * $M1^-1 == A1 * F4^-1
assert_img T : a1->b1, {b.lower()}->{b.lower()}
assert_img T^2 : b1->b2, {b.lower()}->{b.lower()}
assert_eq T * A1 * {b}^-1 * T^-1 == B1 * {b}^-1
assert_eq T^2 * B1 * {b}^-1 * T^-2 == B2 * {b}^-1
def M2 = {c} * {d}^-1 * B{2 * k - 1}
assert_img $M2 : {c.lower()}->b{2 * k - 1}, {d.lower()}->{d.lower()}
assert_eq $M2 * {c} * {d}^-1 * $M2^-1 == B{2 * k - 1} * {d}^-1
assert_eq A1 * F1 * A1^-1 == E
"""


def _t4k3_7_gens(g: int) -> list[str]:
    k = _k(g)
    return ["T", "A1 * A2^-1", f"F{g - 2} * U3^-1", f"B{2 * k} * B{2 * k + 1}^-1"]


def _t4k3_7(g: int) -> str:
    k = _k(g)
    f = f"F{g - 2}"
    return f"""\
def M1 = {f} * U3^-1 * A1 * A2^-1
assert_img $M1 : {f.lower()}->{f.lower()}, u3->a2
assert_eq $M1 * {f} * U3^-1 * $M1^-1 == {f} * A2^-1
def M2 = B{2 * k} * B{2 * k + 1}^-1 * A1 * U3^-1
assert_img $M2 : b{2 * k}->b{2 * k}, b{2 * k + 1}->u3
assert_eq $M2 * B{2 * k} * B{2 * k + 1}^-1 * $M2^-1 == B{2 * k} * U3^-1
assert_img T^3 : b{2 * k}->b1, a1->b2
assert_eq T^3 * B{2 * k} * A1^-1 * T^-3 == B1 * B2^-1
assert_img T^-3 : u3->c{2 * k}
assert_eq T^-3 * U3 * T^3 == C{2 * k}
def PHI = T^3 * C{2 * k} * B{2 * k + 1} * C{2 * k - 1} * B{2 * k} * C{2 * k} * U{g - 4}^-1 * T^-2
assert_img $PHI : {f.lower()}->f1
assert_eq $PHI * {f} * $PHI^-1 == F1
assert_eq A1 * F1 * A1^-1 == E
"""


# ---------------------------------------------------------------------------
# reflections and commutators

def _prop41_gens(g: int) -> list[str]:
    return ["T", "R1"]


def _prop41(g: int) -> str:
    m = GenusModel(g, "reflection").half_turn
    return f"""\
assert_eq R1 * R1 == 1
assert_eq R2 * R2 == 1
assert_eq R2 * R1 == T
assert_eq T^{m} * R1 * T^-{m} == R2
assert_eq T^{m} * R1 * T^-{m} * R1^-1 == T
"""


def _commutator_lines(g: int, base: str) -> tuple[list[str], list[str]]:
    """Return (steps, commutator words) expressing ``base``'s generators."""
    m = GenusModel(g, "reflection").half_turn
    steps = [f"assert_eq T^{m} * R1 * T^-{m} * R1^-1 == T"]
    comms = [f"T^{m} * R1 * T^-{m} * R1^-1"]
    k = _k(g)

    def two(label: str, x: str, y: str, src: str, dst: str, z: str, w: str) -> None:
        # X Z^-1 Y W^-1 = [X Y, phi] with phi: (x, y) -> (w, z)
        steps.append(f"find {label} : {src}->{w.lower()}, {dst}->{z.lower()}")
        steps.append(f"assert_eq {x} * {y} * ${label} * {y}^-1 * {x}^-1 * ${label}^-1 == {x} * {z}^-1 * {y} * {w}^-1")
        comms.append(f"{x} * {y} * ${label} * {y}^-1 * {x}^-1 * ${label}^-1")

    def one(label: str, x: str, y: str) -> None:
        # X Y^-1 = [X, psi] with psi: x -> y
        steps.append(f"find {label} : {x.lower()}->{y.lower()}")
        steps.append(f"assert_eq {x} * ${label} * {x}^-1 * ${label}^-1 == {x} * {y}^-1")
        comms.append(f"{x} * ${label} * {x}^-1 * ${label}^-1")

    if base == "t42":
        two("PHI", "G10", "F18", "gm10", "f18", "C2", "D33")
    elif base == "t29":
        two("PHI", "G10", "F18", "gm10", "f18", "C2", "C12")
    elif base == "t4k2":
        two("PSI1", "G10", "F18", "gm10", "f18", "C2", f"B{2 * k}")
        one("PSI2", f"C{2 * k - 1}", f"D{4 * k + 1}")
    elif base == "t4k3":
        two("PSI1", "G10", "F18", "gm10", "f18", "C2", "U33")
        one("PSI2", f"B{2 * k + 1}", "A1")
    elif base == "t8even":
        one("PSI1", f"D{g - 1}", "A2")
        one("PSI2", "F1", "B2")
    elif base == "t9odd":
        one("PSI1", "A1", "A2")
        one("PSI2", "F1", "B2")
    elif base == "t4k2_10":
        one("PSI1", "A1", "A2")
        one("PSI2", "F1", f"B{2 * k}")
        one("PSI3", f"C{2 * k - 1}", f"D{4 * k + 1}")
    elif base == "t4k3_7":
        one("PSI1", "A1", "A2")
        one("PSI2", f"F{g - 2}", "U3")
        one("PSI3", f"B{2 * k}", f"B{2 * k + 1}")
    else:  # pragma: no cover
        raise KeyError(base)
    return steps, comms


def _commutator_script(base: str) -> Callable[[int], str]:
    def body(g: int) -> str:
        steps, _ = _commutator_lines(g, base)
        return "\n".join(steps) + "\n"

    return body


def _commutator_gens(base: str) -> Callable[[int], list[str]]:
    def gens(g: int) -> list[str]:
        return _commutator_lines(g, base)[1]

    return gens


# ---------------------------------------------------------------------------
# registry

THEOREMS: dict[str, Theorem] = {}


def _register(t: Theorem) -> None:
    THEOREMS[t.id] = t


_ODD, _EVEN = (1, 3), (0, 2)
for _t in (
    Theorem("t29", "two generators, odd g", 27, _ODD, "rotation", _t29_gens, _t29),
    Theorem("t42", "two generators, even g", 42, _EVEN, "rotation", _t42_gens, _t42),
    Theorem("t9odd", "three generators, odd g", 9, _ODD, "rotation", _t9odd_gens, _t9odd),
    Theorem("t8even", "three generators, even g", 8, _EVEN, "rotation", _t8even_gens, _t8even),
    Theorem("t4k2", "three generators, g = 4k+2", 30, (2,), "reflection", _t4k2_gens, _t4k2),
    Theorem("t4k3", "three generators, g = 4k+3", 43, (3,), "reflection", _t4k3_gens, _t4k3),
    Theorem("t4k2_10", "four generators, g = 4k+2", 10, (2,), "reflection", _t4k2_10_gens, _t4k2_10),
    Theorem("t4k3_7", "four generators, g = 4k+3", 7, (3,), "reflection", _t4k3_7_gens, _t4k3_7),
    Theorem("prop41", "T as a commutator of T^m and rho1", 7, (0, 1, 2, 3), "reflection",
            _prop41_gens, _prop41, level="signed"),
    Theorem("com4k", "two commutators, g = 4k", 44, (0,), "reflection",
            _commutator_gens("t42"), _commutator_script("t42")),
    Theorem("com4k1", "two commutators, g = 4k+1", 29, (1,), "reflection",
            _commutator_gens("t29"), _commutator_script("t29")),
    Theorem("com4k2", "three commutators, g = 4k+2", 30, (2,), "reflection",
            _commutator_gens("t4k2"), _commutator_script("t4k2")),
    Theorem("com4k3", "three commutators, g = 4k+3", 43, (3,), "reflection",
            _commutator_gens("t4k3"), _commutator_script("t4k3")),
    Theorem("com4k_8", "three commutators, g = 4k", 8, (0,), "reflection",
            _commutator_gens("t8even"), _commutator_script("t8even")),
    Theorem("com4k1_9", "three commutators, g = 4k+1", 9, (1,), "reflection",
            _commutator_gens("t9odd"), _commutator_script("t9odd")),
    Theorem("com4k2_10", "four commutators, g = 4k+2", 10, (2,), "reflection",
            _commutator_gens("t4k2_10"), _commutator_script("t4k2_10")),
    Theorem("com4k3_7", "four commutators, g = 4k+3", 7, (3,), "reflection",
            _commutator_gens("t4k3_7"), _commutator_script("t4k3_7")),
):
    _register(_t)

SCRIPT_IDS = tuple(THEOREMS)
# generator sets whose closing step compares against the Omori reference
GENERATION_IDS = tuple(i for i in THEOREMS if i != "prop41")


def theorem(id: str) -> Theorem:
    try:
        return THEOREMS[id]
    except KeyError:
        raise KeyError(f"unknown theorem {id!r}; choose from {', '.join(THEOREMS)}") from None


def check_range(id: str, g: int) -> Theorem:
    t = theorem(id)
    if not t.applies(g):
        raise ScriptRangeError(f"{id} needs {t.range_text}; got g={g} (bound {t.bound})")
    return t


def fitting(model: GenusModel, *, commutators: bool = True) -> list[str]:
    """Ids of the builtin scripts that run on ``model``."""
    return [i for i, t in THEOREMS.items()
            if t.fits(model) and (commutators or not i.startswith("com"))]


def generator_words(id: str, g: int) -> list[str]:
    return check_range(id, g).generators(g)


def builtin_text(id: str, g: int, *, closing: bool = True) -> str:
    """DSL text of a builtin script; ``closing`` appends the generation claim."""
    t = check_range(id, g)
    text = t.body(g)
    if closing and id != "prop41":
        text += _gen_line(t.generators(g)) + "\n"
    return text


def builtin_script(id: str, g: int, *, closing: bool = True,
                   model: GenusModel | None = None) -> Script:
    t = check_range(id, g)
    if model is not None and (model.g != g or not t.fits(model)):
        raise ScriptRangeError(f"{id} does not run on {model}")
    variants = []
    if id == "t29" and g == 27:
        variants.append("g=27: G8, G9 end in D1")
    if id == "t42" and g in (42, 44):
        variants.append(f"g={g}: H2 ends in D{_wrap(44, g - 1)}")
    if id == "t4k3" and g == 43:
        variants.append("g=43: L2 ends in U3")
    return Script.from_text(id, model or t.model(g), builtin_text(id, g, closing=closing),
                            title=t.title, variants=variants, level=t.level)


def generator_set(id: str, g: int) -> list[Word]:
    return [parse_word(w) for w in generator_words(id, g)]


def generator_matrices(id: str, g: int, ctx=None) -> list:
    """Mod-2 images of a theorem's generators, with the script's labels in scope."""
    from ..words import evaluate_mod2
    from .steps import Context, script_environment

    script = builtin_script(id, g, closing=False, model=None if ctx is None else ctx.model)
    ctx = ctx or Context.standard(script.model)
    env = script_environment(script, ctx)
    return [evaluate_mod2(w, env, ctx.catalog, ctx.spec) for w in generator_set(id, g)]
