"""
Reading and writing lattice files.

A lattice file is a JSON document::

    {"d": -17, "rank": 2,
     "gram": [[["102", "0"], ["0", "1"]], [["0", "-1"], ["0", "0"]]],
     "pseudo_basis": [{"ideal": {"den": 1, "hnf": [[1, 0], [0, 1]]},
                       "vector": [["1", "0"], ["0", "0"]]}, ...]}

Field elements are pairs ``[a, b]`` meaning ``a + b*sqrt(d)``; a missing
``pseudo_basis`` means the free lattice on the standard basis.
"""
from fractions import Fraction
import json
import typing as t
import typing_extensions as te

from .exceptions import HermGenusError, InputError, LatticeFileError
from .field import FieldElement, QuadField, make_field, parse_rational
from .ideal import FracIdeal, ideal_from_generators
from .lattice import HermLattice, Vector, free_lattice, make_space


__all__ = (
    "parse_lattice_file",
    "parse_lattice",
    "read_lattice",
    "serialize_lattice",
    "dump_lattice",
    "write_lattice",
    "LatticeDoc",
)


Pair = t.List[str]


class IdealDoc(te.TypedDict, total=False):
    den: int
    hnf: t.List[t.List[int]]
    generators: t.List[Pair]


class PseudoBasisDoc(te.TypedDict):
    ideal: IdealDoc
    vector: t.List[Pair]


class LatticeDoc(te.TypedDict, total=False):
    d: int
    rank: int
    gram: t.List[t.List[Pair]]
    pseudo_basis: t.List[PseudoBasisDoc]


VF = t.TypeVar("VF", bound=t.Callable[..., t.Any])
validators: t.Dict[str, t.Callable[..., t.Any]] = {}


def validator(*shapes: str) -> t.Callable[[VF], VF]:
    def decorator(f: VF) -> VF:
        for shape in shapes:
            validators[shape] = f
        return f
    return decorator


def validate(shape: str, path: str, value: t.Any, *args: t.Any) -> t.Any:
    try:
        return validators[shape](value, *args)
    except LatticeFileError:
        raise
    except (InputError, ValueError, TypeError, KeyError) as error:
        raise LatticeFileError(path, str(error)) from error


@validator("int")
def validate_int(val: t.Any) -> int:
    if not isinstance(val, int) or isinstance(val, bool):
        raise ValueError("expected an integer, got %r" % (val,))
    return val


@validator("rational")
def validate_rational(val: t.Any) -> Fraction:
    if isinstance(val, int) and not isinstance(val, bool):
        return Fraction(val)
    if not isinstance(val, str):
        raise ValueError("expected a rational string, got %r" % (val,))
    return parse_rational(val)


@validator("element")
def validate_element(val: t.Any, field: QuadField) -> FieldElement:
    if not isinstance(val, list) or len(val) != 2:
        raise ValueError("expected a pair [a, b], got %r" % (val,))
    return field(validate_rational(val[0]), validate_rational(val[1]))


@validator("vector")
def validate_vector(val: t.Any, field: QuadField, rank: int) -> Vector:
    if not isinstance(val, list) or len(val) != rank:
        raise ValueError("expected %d entries" % rank)
    return [validate_element(x, field) for x in val]


@validator("ideal")
def validate_ideal(val: t.Any, field: QuadField) -> FracIdeal:
    if not isinstance(val, dict):
        raise ValueError("expected an object")
    if "hnf" in val:
        den = validate_int(val.get("den", 1))
        (n, zero), (r, s) = val["hnf"]
        n, zero, r, s = (validate_int(x) for x in (n, zero, r, s))
        if den <= 0 or n <= 0 or s <= 0 or zero:
            raise ValueError("hnf must be [[n, 0], [r, s]] with n, s, den > 0")
        basis = [
            field.from_omega(Fraction(n, den), 0),
            field.from_omega(Fraction(r, den), Fraction(s, den)),
        ]
        ideal = FracIdeal.from_z_generators(field, basis)
        if ideal_from_generators(basis, field) != ideal:
            raise ValueError("hnf does not describe an O-ideal")
        return ideal
    gens = val.get("generators")
    if not isinstance(gens, list):
        raise ValueError("ideal needs 'hnf' or 'generators'")
    return ideal_from_generators(
        [validate_element(g, field) for g in gens], field)


def parse_lattice(doc: t.Any) -> HermLattice:
    """
    Build a lattice from a decoded lattice document.

    :raises LatticeFileError: naming the offending field.
    """
    if not isinstance(doc, dict):
        raise LatticeFileError("<document>", "expected an object")
    for key in ("d", "gram"):
        if key not in doc:
            raise LatticeFileError(key, "missing")
    d = validate("int", "d", doc["d"])
    try:
        field = make_field(d)
    except InputError as error:
        raise LatticeFileError("d", str(error)) from error

    gram_doc = doc["gram"]
    if not isinstance(gram_doc, list) or not gram_doc:
        raise LatticeFileError("gram", "expected a nonempty list of rows")
    rank = len(gram_doc)
    if "rank" in doc and validate("int", "rank", doc["rank"]) != rank:
        raise LatticeFileError("rank", "does not match the Gram matrix")
    gram = [
        validate("vector", "gram[%d]" % i, row, field, rank)
        for i, row in enumerate(gram_doc)
    ]
    try:
        space = make_space(field, gram)
    except InputError as error:
        raise LatticeFileError("gram", str(error)) from error

    pb_doc = doc.get("pseudo_basis")
    if pb_doc is None:
        return free_lattice(space)
    if not isinstance(pb_doc, list) or len(pb_doc) != rank:
        raise LatticeFileError("pseudo_basis", "expected %d pairs" % rank)
    pairs = []
    for i, pair in enumerate(pb_doc):
        path = "pseudo_basis[%d]" % i
        if not isinstance(pair, dict):
            raise LatticeFileError(path, "expected an object")
        ideal = validate("ideal", path + ".ideal", pair.get("ideal"), field)
        vec = validate("vector", path + ".vector", pair.get("vector"), field, rank)
        pairs.append((ideal, vec))
    try:
        return HermLattice(space, pairs)
    except HermGenusError as error:
        raise LatticeFileError("pseudo_basis", str(error)) from error


def parse_lattice_file(text: str) -> HermLattice:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as error:
        raise LatticeFileError(
            "<document>",
            "line %d column %d: %s" % (error.lineno, error.colno, error.msg),
        ) from error
    return parse_lattice(doc)


def read_lattice(path: str) -> HermLattice:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as error:
        raise InputError("Cannot read %s: %s" % (path, error.strerror)) from error
    return parse_lattice_file(text)


def serialize_lattice(L: HermLattice) -> LatticeDoc:
    return t.cast(LatticeDoc, L.asdict())


def dump_lattice(L: HermLattice) -> str:
    return json.dumps(serialize_lattice(L), sort_keys=True, indent=2)


def write_lattice(L: HermLattice, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dump_lattice(L))
        fh.write("\n")
