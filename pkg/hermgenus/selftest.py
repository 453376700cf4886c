"""
Invariant suites run by ``herm-genus selftest``.

Each suite is registered with :func:`suite` and returns a small summary
dict; a suite fails by raising :class:`~hermgenus.exceptions.HermGenusError`
or ``AssertionError``.
"""
import itertools
import logging
import random
import typing as t

from sortedcontainers import SortedDict  # type: ignore
from sympy import factorint, primefactors, primerange  # type: ignore

from .classgroup import class_group, count_reduced_forms
from .config import HermGenusConfig
from .exceptions import HermGenusError, PreconditionError
from .field import QuadField, make_field
from .genus import genus_group, is_neighbour, neighbour, psi_neighbour_generator
from .ideal import (
    FracIdeal,
    different,
    prime_decomposition,
    unit_ideal,
)
from .lattice import (
    HermLattice,
    build_H_lattice,
    free_lattice,
    index_ideal,
    make_space,
    norm_ideal,
    rho,
    scale,
)
from .local import (
    DetGroupLabel,
    det_group,
    det_group_maximal_crosscheck,
    is_isotropic,
    is_modular_at,
    jordan_invariants,
    local_data,
)
from .oracle import mod_PN_det_oracle


__all__ = (
    "suite",
    "suites",
    "example_lattice",
    "diagonal_lattice",
    "random_lattice",
    "run_suites",
    "ORACLE_CASES",
    "RANDOM_FIELDS",
)


logger = logging.getLogger(__name__)

SF = t.TypeVar("SF", bound=t.Callable[[HermGenusConfig], dict])
suites: t.Dict[str, t.Callable[[HermGenusConfig], dict]] = {}

ORACLE_CASES = ((-17, 17), (-17, 2), (-5, 5), (-2, 2), (-7, 7))
RANDOM_FIELDS = (-1, -2, -3, -5, -7, -17)
CLASS_GROUP_RANGE = range(-200, 0)
RANDOM_LATTICES = 200
NEIGHBOUR_PAIRS = 50


def suite(name: str) -> t.Callable[[SF], SF]:
    def decorator(f: SF) -> SF:
        suites[name] = f
        return f
    return decorator


def example_lattice() -> HermLattice:
    """Free lattice over Q(sqrt(-17)) with Gram [[102, s], [-s, 0]]."""
    field = make_field(-17)
    s = field.sqrt_d
    return free_lattice(make_space(field, [[field(102), s], [-s, field(0)]]))


def diagonal_lattice(field: QuadField, entries: t.Sequence[int]) -> HermLattice:
    m = len(entries)
    gram = [
        [field(entries[i]) if i == j else field.zero for j in range(m)]
        for i in range(m)
    ]
    return free_lattice(make_space(field, gram))


def _random_ideal(rng: random.Random, field: QuadField) -> FracIdeal:
    choice = rng.randrange(4)
    if choice == 0:
        return unit_ideal(field)
    p = rng.choice((2, 3, 5, 7))
    prime = rng.choice(prime_decomposition(field, p)).ideal
    return prime if choice < 3 else prime.inverse()


def random_lattice(
    rng: random.Random,
    field: QuadField,
    rank: int,
) -> HermLattice:
    """A lattice with a small random hermitian Gram and pseudo-basis."""
    while True:
        gram = [[field.zero] * rank for _ in range(rank)]
        for i in range(rank):
            gram[i][i] = field(rng.choice((-3, -2, -1, 1, 2, 3, 5)))
            for j in range(i + 1, rank):
                x = field(rng.randint(-2, 2), rng.randint(-1, 1))
                gram[i][j], gram[j][i] = x, x.conj()
        try:
            space = make_space(field, gram)
        except HermGenusError:
            continue
        break
    pairs = []
    for i in range(rank):
        vec = [field.zero] * rank
        vec[i] = field.one
        for j in range(i):
            vec[j] = field(rng.randint(-1, 1), rng.randint(-1, 1))
        pairs.append((_random_ideal(rng, field), vec))
    return HermLattice(space, pairs)


def _squarefree(n: int) -> bool:
    return all(e == 1 for e in factorint(n).values())


@suite("class_group_oracle")
def check_class_groups(config: HermGenusConfig) -> dict:
    checked = 0
    for d in CLASS_GROUP_RANGE:
        if d != -1 and not _squarefree(-d):
            continue
        field = make_field(d)
        cg = class_group(field)
        assert cg.order == count_reduced_forms(field.disc), d
        checked += 1
    return {"fields": checked}


@suite("scale_norm_chain")
def check_scale_norm_chain(config: HermGenusConfig) -> dict:
    rng = random.Random(config.seed)
    fields = [make_field(d) for d in RANDOM_FIELDS]
    for _ in range(RANDOM_LATTICES):
        field = rng.choice(fields)
        L = random_lattice(rng, field, rng.randint(1, 4))
        inv_diff = different(field).inverse()
        s, n = scale(L), norm_ideal(L)
        assert s.issubset(inv_diff * n), L
        assert (inv_diff * n).issubset(inv_diff * s), L
    return {"lattices": RANDOM_LATTICES}


@suite("rho_map")
def check_rho(config: HermGenusConfig) -> dict:
    checked = 0
    for d, p in ORACLE_CASES:
        field = make_field(d)
        prime = prime_decomposition(field, p)[0]
        lattices = [build_H_lattice(field, prime, i) for i in range(4)]
        for i, L in enumerate(lattices):
            image = rho(L, prime)
            expected = lattices[i - 2] if i >= 2 else L
            assert jordan_invariants(image, p) == jordan_invariants(expected, p), \
                (d, p, i)
            checked += 1
    return {"lattices": checked}


def _oracle_lattices(field: QuadField, p: int) -> t.List[HermLattice]:
    prime = prime_decomposition(field, p)[0]
    e = local_data(field, p).e
    lattices = [
        build_H_lattice(field, prime, i) for i in (0, 1) if (i - e) % 2 == 0
    ]
    lattices.append(diagonal_lattice(field, [1, 1]))
    lattices.append(diagonal_lattice(field, [1, p]))
    return lattices


@suite("det_group_oracle")
def check_det_group(config: HermGenusConfig) -> dict:
    checked = 0
    for d, p in ORACLE_CASES:
        field = make_field(d)
        for L in _oracle_lattices(field, p):
            label = det_group(L, p)
            seen = mod_PN_det_oracle(L, p, config.oracle_depth)
            if label is DetGroupLabel.E1:
                assert list(seen) == [DetGroupLabel.E1], (d, p, L)
                crosscheck = det_group_maximal_crosscheck(L.space, p)
                assert crosscheck is DetGroupLabel.E1, (d, p, L)
            else:
                assert DetGroupLabel.E0 in seen, (d, p, L)
            checked += 1
    return {"lattices": checked}


def _neighbour_lattices() -> t.List[HermLattice]:
    lattices = [example_lattice()]
    for d in (-1, -2, -5, -17):
        field = make_field(d)
        lattices.append(diagonal_lattice(field, [1, 1]))
        lattices.append(diagonal_lattice(field, [1, -1]))
        lattices.append(diagonal_lattice(field, [1, 1, 1]))
        odd = [p for p in primefactors(abs(field.disc)) if p > 2]
        if odd:
            prime = prime_decomposition(field, odd[-1])[0]
            lattices.append(build_H_lattice(field, prime, 0))
    return lattices


@suite("neighbour_contract")
def check_neighbours(config: HermGenusConfig) -> dict:
    checked = 0
    for L, p in itertools.product(_neighbour_lattices(), primerange(3, 30)):
        ld = local_data(L.field, p)
        if not is_isotropic(L.space, p) or not is_modular_at(L, ld):
            continue
        for prime in ld.primes:
            try:
                L2 = neighbour(L, prime)
            except PreconditionError:
                continue
            assert is_neighbour(L, L2, prime), (L, prime)
            assert is_neighbour(L2, L, prime.conj()), (L, prime)
            expected = prime.ideal / prime.conj().ideal
            assert index_ideal(L, L2) == expected, (L, prime)
            checked += 1
    assert checked >= NEIGHBOUR_PAIRS, checked
    return {"pairs": checked}


@suite("group_sanity")
def check_groups(config: HermGenusConfig) -> dict:
    checked = 0
    pairs = 0
    for L in _neighbour_lattices():
        if L.rank < 2:
            continue
        G = genus_group(L, prime_bound=config.prime_bound, verify=True)
        checked += 1
        primes = [
            q for p in primerange(3, 20)
            for q in prime_decomposition(L.field, p)
            if is_isotropic(L.space, p) and is_modular_at(L, p)
        ]
        images = SortedDict(
            (q.ideal.key(), (q, psi_neighbour_generator(G, q))) for q in primes)
        for (q1, g1), (q2, g2) in itertools.combinations(images.values(), 2):
            signs = G.profile.c_vector(q1) ^ G.profile.c_vector(q2)
            direct = G.psi_of_ideal(q1.ideal * q2.ideal, signs)
            assert G.mul(g1, g2) == direct, (q1, q2)
            pairs += 1
    return {"groups": checked, "psi_pairs": pairs}


def run_suites(
    config: HermGenusConfig,
    names: t.Optional[t.Sequence[str]] = None,
) -> t.Dict[str, dict]:
    """Run the named suites (all by default) and collect their outcome."""
    results: t.Dict[str, dict] = {}
    for name in names or sorted(suites):
        logger.info("Running suite %s", name)
        try:
            summary = suites[name](config)
        except (HermGenusError, AssertionError) as error:
            logger.warning("Suite %s failed: %r", name, error)
            results[name] = {"passed": False, "error": repr(error)}
            continue
        results[name] = dict(summary, passed=True)
    return results
