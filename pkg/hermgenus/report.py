"""
Reports produced by the command line front end.

A :class:`Report` is a mapping of sections built from ``asdict()`` views
of the computed objects; the same data renders either as sorted JSON or as
an indented text view.
"""
import json
import typing as t

from sortedcontainers import SortedSet  # type: ignore
from sympy import primefactors  # type: ignore

from .classgroup import C0Subgroup, ClassGroup
from .config import OutputFormat
from .exceptions import ExitCode
from .field import QuadField, format_rational
from .genus import DetProfile, GenusGroup, SpecialGeneraResult
from .ideal import FracIdeal, different, prime_decomposition
from .lattice import HermLattice, norm_ideal, scale, volume_ideal
from .local import det_group, jordan_decomposition, local_data


__all__ = (
    "Report",
    "ideal_doc",
    "field_info_sections",
    "class_group_sections",
    "analyze_sections",
    "special_genera_sections",
    "relevant_primes",
)


class Report:

    __slots__ = ("verb", "sections", "exit_code")

    def __init__(
        self,
        verb: str,
        sections: t.Dict[str, t.Any],
        exit_code: ExitCode = ExitCode.SUCCESS,
    ) -> None:
        self.verb = verb
        self.sections = sections
        self.exit_code = exit_code

    def asdict(self) -> dict:
        doc = {"verb": self.verb, "exit_code": int(self.exit_code)}
        doc.update(self.sections)
        return doc

    def render(self, fmt: OutputFormat) -> str:
        if fmt is OutputFormat.JSON:
            return json.dumps(self.asdict(), sort_keys=True, indent=2)
        lines: t.List[str] = []
        for key in sorted(self.sections):
            lines.append("[%s]" % key)
            _render_text(self.sections[key], 1, lines)
        return "\n".join(lines)


def _scalar(value: t.Any) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, list) and all(isinstance(v, str) for v in value):
        return "[%s]" % ", ".join(value)
    return str(value)


def _render_text(value: t.Any, depth: int, lines: t.List[str]) -> None:
    pad = "  " * depth
    if isinstance(value, dict):
        for key in sorted(value):
            item = value[key]
            if isinstance(item, (dict, list)) and not _is_flat(item):
                lines.append("%s%s:" % (pad, key))
                _render_text(item, depth + 1, lines)
            else:
                lines.append("%s%s: %s" % (pad, key, _scalar(item)))
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)) and not _is_flat(item):
                lines.append("%s-" % pad)
                _render_text(item, depth + 1, lines)
            else:
                lines.append("%s- %s" % (pad, _scalar(item)))
    else:
        lines.append("%s%s" % (pad, _scalar(value)))


def _is_flat(value: t.Any) -> bool:
    return isinstance(value, list) and all(
        not isinstance(v, (dict, list)) or
        (isinstance(v, list) and all(isinstance(w, str) for w in v))
        for v in value
    )


def ideal_doc(ideal: FracIdeal) -> dict:
    doc = ideal.asdict()
    doc["norm"] = format_rational(ideal.norm())
    return doc


def relevant_primes(L: HermLattice) -> t.List[int]:
    """Ramified primes and the primes dividing scale, norm or volume."""
    primes = SortedSet(primefactors(abs(L.field.disc)))
    for ideal in (scale(L), norm_ideal(L), volume_ideal(L)):
        n = ideal.norm()
        for value in (n.numerator, n.denominator):
            if value > 1:
                primes.update(primefactors(value))
    return list(primes)


def field_info_sections(field: QuadField, cg: ClassGroup) -> dict:
    ramified = [
        prime_decomposition(field, p)[0] for p in primefactors(abs(field.disc))
    ]
    return {
        "field": field.asdict(),
        "different": ideal_doc(different(field)),
        "ramified_primes": [
            dict(q.asdict(), e=local_data(field, q.p).e) for q in ramified
        ],
        "class_number": cg.order,
    }


def class_group_sections(cg: ClassGroup, c0: C0Subgroup) -> dict:
    return {"class_group": cg.asdict(), "c0": c0.asdict()}


def analyze_sections(L: HermLattice, profile: DetProfile) -> dict:
    rows = []
    for p in relevant_primes(L):
        ld = local_data(L.field, p)
        rows.append({
            "p": p,
            "local": ld.asdict(),
            "jordan": [b.asdict() for b in jordan_decomposition(L, ld)],
            "det_group": str(det_group(L, ld)),
        })
    return {
        "lattice": L.asdict(),
        "scale": ideal_doc(scale(L)),
        "norm": ideal_doc(norm_ideal(L)),
        "local": rows,
        "det_profile": profile.asdict(),
    }


def _group_doc(group: GenusGroup) -> dict:
    doc = group.asdict()
    doc["elements"] = [group.label(g) for g in group.elements]
    return doc


def special_genera_sections(result: SpecialGeneraResult) -> dict:
    group = result.group
    generators = [
        {
            "prime": prime.asdict(),
            "ideal": ideal_doc(prime.ideal),
            "image": group.label(g),
            "image_order": group.element_order(g),
            "relative_order": o,
        }
        for (prime, g), o in zip(result.generators, result.orders)
    ]
    reps = [
        {
            "exponents": list(rep.exponents),
            "label": group.label(rep.label),
            "index": ideal_doc(rep.index),
            "lattice": rep.lattice.asdict(),
        }
        for rep in result.representatives
    ]
    doc = _group_doc(group)
    doc["generators"] = generators
    doc["det_profile"] = group.profile.asdict()
    return {"group": doc, "representatives": reps}
