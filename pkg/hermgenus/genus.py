"""
Special genera in the genus of a hermitian lattice.

The finite group ``G(L)`` is held as an explicit multiplication on pairs
``(i, x)``: ``i`` indexes a coset representative ``A_i`` of ``C / C_0`` and
``x`` is a canonical representative of ``E(L) / R(L)`` written as a bit
mask over the primes of ``P(L)`` (bit set means "outside E1").
"""
import itertools
import logging
import typing as t

from sortedcontainers import SortedSet  # type: ignore
from sympy import multiplicity, primefactors, primerange  # type: ignore

from .classgroup import C0Subgroup, ClassGroup, c0_subgroup, class_group
from .exceptions import PreconditionError, PrimeSearchError, VerificationError
from .field import FieldElement, torsion_units
from .ideal import (
    FracIdeal,
    PrimeIdeal,
    PrimeKind,
    element_valuation,
    ideal_pow,
    is_principal,
    local_generator,
    residue_representatives,
    unit_ideal,
    valuation,
)
from .lattice import (
    HermLattice,
    Vector,
    apply_vector,
    index_ideal,
    intersect,
    lattice_sum,
    local_basis,
    pairing_sublattice,
    quotient_invariants,
    scale,
    scale_by_ideal,
    to_coords,
)
from .local import (
    DetGroupLabel,
    LocalData,
    det_group,
    is_E1_element,
    is_isotropic,
    is_modular_at,
    local_data,
    same_local_invariants,
)
from .utils.abelian import F2Space


__all__ = (
    "DetProfile",
    "det_profile",
    "r_subgroup",
    "GenusGroup",
    "k_index",
    "cocycle_alpha",
    "genus_group",
    "psi_neighbour_generator",
    "neighbour",
    "is_neighbour",
    "prime_search",
    "representative_labels",
    "Representative",
    "SpecialGeneraResult",
    "special_genera",
    "DEFAULT_PRIME_BOUND",
)


logger = logging.getLogger(__name__)

DEFAULT_PRIME_BOUND = 1000

Element = t.Tuple[int, int]


class DetProfile:
    """The primes ``P(L)`` where the determinant group is E1."""

    __slots__ = ("primes", "local")

    def __init__(self, primes: t.List[int], local: t.List[LocalData]) -> None:
        self.primes = primes
        self.local = local

    def __len__(self) -> int:
        return len(self.primes)

    def sign_vector(self, delta: FieldElement) -> int:
        """Bit mask of the primes where ``delta`` is not in E1."""
        mask = 0
        for k, ld in enumerate(self.local):
            if not is_E1_element(delta, ld):
                mask |= 1 << k
        return mask

    def c_vector(self, prime: PrimeIdeal) -> int:
        """``c(P)``: nontrivial exactly at the prime below P."""
        if prime.p in self.primes:
            return 1 << self.primes.index(prime.p)
        return 0

    def asdict(self) -> dict:
        return {"primes": list(self.primes), "order": 1 << len(self.primes)}


def det_profile(L: HermLattice) -> DetProfile:
    primes, local = [], []
    for p in primefactors(abs(L.field.disc)):
        ld = local_data(L.field, p)
        if det_group(L, ld) is DetGroupLabel.E1:
            primes.append(p)
            local.append(ld)
    logger.info("P(L) = %r", primes)
    return DetProfile(primes, local)


def r_subgroup(profile: DetProfile, units: t.Sequence[FieldElement]) -> F2Space:
    """Span of the sign vectors of the global norm-one units."""
    space = F2Space(len(profile))
    for u in units:
        space.add(profile.sign_vector(u))
    full = (1 << len(profile)) - 1
    if space.rank == 1 and len(profile) > 1 and space.basis[0] != full:
        logger.warning(
            "R(L) embeds non-diagonally: generator %s over primes %r",
            format(space.basis[0], "0%db" % len(profile))[::-1],
            profile.primes)
    return space


class GenusGroup:

    __slots__ = (
        "lattice",
        "classgroup",
        "c0",
        "profile",
        "r_space",
        "quotient",
        "k_table",
        "alpha",
        "signs",
        "elements",
        "_orders",
    )

    def __init__(
        self,
        lattice: HermLattice,
        classgroup: ClassGroup,
        c0: C0Subgroup,
        profile: DetProfile,
        r_space: F2Space,
    ) -> None:
        self.lattice = lattice
        self.classgroup = classgroup
        self.c0 = c0
        self.profile = profile
        self.r_space = r_space
        self.quotient = r_space.quotient_representatives()
        reps = c0.reps
        r = len(reps)
        self.k_table: t.Dict[t.Tuple[int, int], int] = {}
        self.alpha: t.Dict[t.Tuple[int, int], FieldElement] = {}
        classes = [classgroup.class_of(a) for a in reps]
        twists = [a * a.conj().inverse() for a in reps]
        for i, j in itertools.product(range(r), repeat=2):
            k = c0.coset_index(classgroup.add(classes[i], classes[j]))
            self.k_table[i, j] = k
            target = twists[k] / twists[i] / twists[j]
            gen = is_principal(target)
            if gen is None:
                raise VerificationError(
                    "Cocycle ideal for (%d, %d) is not principal" % (i, j))
            self.alpha[i, j] = gen
        self.signs = {
            key: profile.sign_vector(a) for key, a in self.alpha.items()}
        self.elements = [(i, x) for i in range(r) for x in self.quotient]
        self._orders: t.Dict[Element, int] = {}

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Element:
        return (0, 0)

    def reduce(self, x: int) -> int:
        return self.r_space.transversal(x)

    def mul(self, a: Element, b: Element) -> Element:
        (i, x), (j, y) = a, b
        return (self.k_table[i, j], self.reduce(self.signs[i, j] ^ x ^ y))

    def power(self, a: Element, n: int) -> Element:
        result = self.identity
        for _ in range(n):
            result = self.mul(result, a)
        return result

    def element_order(self, a: Element) -> int:
        if a not in self._orders:
            k, x = 1, a
            while x != self.identity:
                x = self.mul(x, a)
                k += 1
            self._orders[a] = k
        return self._orders[a]

    def span(self, gens: t.Iterable[Element]) -> SortedSet:
        members = SortedSet([self.identity])
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in members:
                        members.add(y)
                        nxt.append(y)
            frontier = nxt
        return members

    def invariants(self) -> t.List[int]:
        """Invariant factors, read off from counts of element orders."""
        orders = [self.element_order(g) for g in self.elements]
        factors = [1]
        for q in (primefactors(self.order) if self.order > 1 else []):
            # ranks[k] = number of cyclic q-parts of exponent above k
            ranks, prev, k = [], 1, 1
            while True:
                count = sum(1 for o in orders if q ** k % o == 0)
                step = multiplicity(q, count // prev) if count > prev else 0
                if not step:
                    break
                ranks.append(step)
                prev, k = count, k + 1
            parts = [q ** sum(1 for r in ranks if r > i) for i in range(ranks[0])]
            if len(parts) > len(factors):
                factors += [1] * (len(parts) - len(factors))
            factors = [f * (parts[i] if i < len(parts) else 1)
                       for i, f in enumerate(factors)]
        return sorted(f for f in factors if f > 1)

    def check(self) -> None:
        """Exhaustive associativity, commutativity and identity checks."""
        els = self.elements
        for a in els:
            if self.mul(a, self.identity) != a:
                raise VerificationError("%r * 1 != %r" % (a, a))
            for b in els:
                if self.mul(a, b) != self.mul(b, a):
                    raise VerificationError("G(L) is not commutative")
                for c in els:
                    if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)):
                        raise VerificationError("G(L) is not associative")
        expected = self.c0.index * (1 << self.r_space.codim)
        if self.order != expected:
            raise VerificationError(
                "|G(L)| = %d but [C:C0][E:R] = %d" % (self.order, expected))

    def psi_of_ideal(self, ideal: FracIdeal, signs: int) -> Element:
        """
        ``psi`` of the pair ``(B conj(B)^-1, signs)``, with both generator
        choices ``alpha`` and ``-alpha`` compared.
        """
        cg = self.classgroup
        i = self.c0.coset_index(cg.class_of(ideal))
        a_i = self.c0.reps[i]
        target = ideal / ideal.conj() / a_i * a_i.conj()
        alpha = is_principal(target)
        if alpha is None:
            raise VerificationError("%r is not principal" % (target,))
        image = (i, self.reduce(self.profile.sign_vector(alpha) ^ signs))
        other = (i, self.reduce(self.profile.sign_vector(-alpha) ^ signs))
        if image != other:
            raise VerificationError("psi depends on the choice of generator")
        return image

    def label(self, element: Element) -> str:
        i, x = element
        bits = format(x, "0%db" % len(self.profile))[::-1] \
            if len(self.profile) else ""
        return "([A%d], %s)" % (i + 1, bits or "1")

    def asdict(self) -> dict:
        return {
            "order": self.order,
            "invariant_factors": self.invariants(),
            "c_c0_index": self.c0.index,
            "e_r_index": 1 << self.r_space.codim,
        }


def k_index(G: GenusGroup, i: int, j: int) -> int:
    """Index k with A_i A_j A_k^-1 in C_0."""
    return G.k_table[i, j]


def cocycle_alpha(G: GenusGroup, i: int, j: int) -> FieldElement:
    return G.alpha[i, j]


def genus_group(
    L: HermLattice,
    classgroup: t.Optional[ClassGroup] = None,
    prime_bound: int = DEFAULT_PRIME_BOUND,
    verify: bool = True,
) -> GenusGroup:
    cg = classgroup or class_group(L.field)
    c0 = c0_subgroup(cg, prime_bound)
    profile = det_profile(L)
    r_space = r_subgroup(profile, torsion_units(L.field))
    group = GenusGroup(L, cg, c0, profile, r_space)
    if verify:
        group.check()
    logger.info(
        "G(L) of order %d = [C:C0] %d * [E:R] %d",
        group.order, c0.index, 1 << r_space.codim)
    return group


def psi_neighbour_generator(G: GenusGroup, prime: PrimeIdeal) -> Element:
    """Image of ``(P conj(P)^-1, c(P))`` in G(L)."""
    return G.psi_of_ideal(prime.ideal, G.profile.c_vector(prime))


def _check_neighbour_preconditions(
    L: HermLattice,
    prime: PrimeIdeal,
    ld: LocalData,
) -> None:
    if L.rank < 2:
        raise PreconditionError("L has rank %d < 2" % L.rank)
    if prime.kind is PrimeKind.RAMIFIED and prime.p == 2:
        raise PreconditionError("P is ramified over 2")
    if not is_modular_at(L, ld):
        raise PreconditionError("L not modular at %d" % prime.p)
    if not is_isotropic(L.space, prime.p):
        raise PreconditionError("V not isotropic at %d" % prime.p)


def _lines(residues: t.Sequence[FieldElement], m: int) -> t.Iterator[t.List[FieldElement]]:
    field_zero = residues[0] * 0
    one = field_zero + 1
    for i in reversed(range(m)):
        for tail in itertools.product(residues, repeat=m - i - 1):
            yield [field_zero] * i + [one] + list(tail)


def neighbour(
    L: HermLattice,
    prime: PrimeIdeal,
    avoid: t.Optional[HermLattice] = None,
    verify: bool = True,
) -> HermLattice:
    """
    The first P-neighbour of L in the canonical enumeration of
    ``L / P L``, skipping ``avoid``.

    Each line is lifted to a vector x with ``Phi(x, x)`` in
    ``P conj(P) scale(L)`` by adding a multiple of a pivot basis vector.
    At a split prime the pivot is scaled by ``conj(pi)``, which keeps x
    modulo ``conj(P)`` and moves it freely modulo P, so every line lifts.
    Elsewhere the pivot is scaled by pi and the line must already be
    isotropic modulo P.

    :raises PreconditionError: if the neighbour preconditions fail or no
        line qualifies.
    """
    ld = local_data(L.field, prime.p)
    _check_neighbour_preconditions(L, prime, ld)
    space = L.space
    sigma = scale(L)
    v_sigma = valuation(sigma, prime)
    target = v_sigma + 1 + valuation(prime.conj().ideal, prime)
    basis = local_basis(L, prime.p)
    residues = residue_representatives(prime)
    split = prime.kind is PrimeKind.SPLIT
    if prime.kind is PrimeKind.INERT:
        shift = L.field(prime.p)
    elif split:
        shift = local_generator(prime.ideal, prime.p).conj()
    else:
        shift = local_generator(prime.ideal, prime.p)
    bound = prime.ideal * sigma
    bar_inverse = prime.conj().ideal.inverse()

    def val(x: FieldElement) -> t.Optional[int]:
        return element_valuation(x, prime)

    def reaches(x: Vector, level: int) -> bool:
        v = val(space.inner(x, x))
        return v is None or v >= level

    def lift(x: Vector) -> t.Optional[Vector]:
        if reaches(x, target):
            return x
        for w in basis:
            if val(space.inner(w, x)) != v_sigma:
                continue
            for g in residues:
                y = [a + g * shift * c for a, c in zip(x, w)]
                if reaches(y, target):
                    return y
        return None

    for coeffs in _lines(residues, L.rank):
        x = apply_vector(coeffs, basis)
        if not split and not reaches(x, v_sigma + 1):
            continue
        x = lift(x)
        if x is None:
            continue
        M = pairing_sublattice(L, x, bound)
        rows = M.z_basis() + [
            to_coords([beta * c for c in x]) for beta in bar_inverse.basis()]
        candidate = HermLattice.from_coordinate_rows(space, rows)
        if verify and not is_neighbour(L, candidate, prime):
            logger.warning(
                "Line %s gave a lattice that is not a %s-neighbour",
                [str(c) for c in coeffs], prime)
            continue
        if avoid is not None and candidate == avoid:
            logger.debug("Skipping neighbour equal to the avoided lattice")
            continue
        logger.debug(
            "%s-neighbour from line %s", prime, [str(c) for c in coeffs])
        return candidate
    raise PreconditionError("No %s-neighbour of L exists" % prime)


def is_neighbour(L: HermLattice, L2: HermLattice, prime: PrimeIdeal) -> bool:
    """Direct check of the P-neighbour definition."""
    ld = local_data(L.field, prime.p)
    if not (is_modular_at(L, ld) and is_modular_at(L2, ld)):
        return False
    s1, s2 = scale(L), scale(L2)
    if any(valuation(s1, q) != valuation(s2, q) for q in ld.primes):
        return False
    meet = intersect(L, L2)
    quotient = [prime.p] * prime.residue_degree
    if quotient_invariants(L, meet) != quotient:
        return False
    if quotient_invariants(L2, meet) != quotient:
        return False
    if not scale_by_ideal(prime.ideal, L).issubset(meet):
        return False
    if not scale_by_ideal(prime.conj().ideal, L2).issubset(meet):
        return False
    expected = prime.ideal / prime.conj().ideal
    return index_ideal(L, L2) == expected


def prime_search(
    L: HermLattice,
    G: GenusGroup,
    prime_bound: int = DEFAULT_PRIME_BOUND,
) -> t.List[t.Tuple[PrimeIdeal, Element]]:
    """
    Greedy choice of neighbour primes, at most one above each rational
    prime, whose images generate G(L).

    :raises PrimeSearchError: if the bound is reached first.
    """
    chosen: t.List[t.Tuple[PrimeIdeal, Element]] = []
    span = G.span([])
    if len(span) == G.order:
        return chosen
    for p in primerange(2, prime_bound):
        ld = local_data(L.field, p)
        if ld.is_ramified and p == 2:
            continue
        if L.rank < 2 or not is_isotropic(L.space, p):
            continue
        if not is_modular_at(L, ld):
            continue
        for prime in ld.primes:
            g = psi_neighbour_generator(G, prime)
            if g in span:
                logger.debug("Prime %s maps into the current span", prime)
                continue
            chosen.append((prime, g))
            span = G.span(h for _, h in chosen)
            logger.info(
                "Chose %s with image %s; span %d of %d",
                prime, G.label(g), len(span), G.order)
            if len(span) == G.order:
                return chosen
            # one generator per rational prime
            break
    raise PrimeSearchError(
        prime_bound, len(span), G.order, [q.p for q, _ in chosen])


def _relative_orders(
    G: GenusGroup,
    gens: t.Sequence[Element],
) -> t.List[int]:
    orders = []
    for i, g in enumerate(gens):
        sub = G.span(gens[:i])
        o, x = 1, g
        while x not in sub:
            x = G.mul(x, g)
            o += 1
        orders.append(o)
    return orders


def representative_labels(
    G: GenusGroup,
    gens: t.Sequence[t.Tuple[PrimeIdeal, Element]],
    orders: t.Sequence[int],
) -> t.List[t.Tuple[t.Tuple[int, ...], Element, FracIdeal]]:
    """
    For every exponent tuple, the G(L) label ``prod g_i^e_i`` and the index
    ideal ``prod (P_i conj(P_i)^-1)^e_i`` a representative must have.
    """
    field = G.lattice.field
    rows = []
    for exps in itertools.product(*(range(o) for o in orders)):
        label = G.identity
        index = unit_ideal(field)
        for (prime, g), e in zip(gens, exps):
            label = G.mul(label, G.power(g, e))
            index = index * ideal_pow(prime.ideal / prime.conj().ideal, e)
        rows.append((exps, label, index))
    return rows


class Representative:

    __slots__ = ("lattice", "exponents", "label", "index")

    def __init__(
        self,
        lattice: HermLattice,
        exponents: t.Tuple[int, ...],
        label: Element,
        index: FracIdeal,
    ) -> None:
        self.lattice = lattice
        self.exponents = exponents
        self.label = label
        self.index = index


class SpecialGeneraResult:
    """Everything the special-genera computation produced."""

    __slots__ = ("group", "generators", "orders", "representatives")

    def __init__(
        self,
        group: GenusGroup,
        generators: t.List[t.Tuple[PrimeIdeal, Element]],
        orders: t.List[int],
        representatives: t.List[Representative],
    ) -> None:
        self.group = group
        self.generators = generators
        self.orders = orders
        self.representatives = representatives

    @property
    def lattices(self) -> t.List[HermLattice]:
        return [rep.lattice for rep in self.representatives]


def _combine_chains(
    L: HermLattice,
    members: t.Sequence[HermLattice],
    bounds: t.Sequence[FracIdeal],
) -> HermLattice:
    """
    The lattice equal to ``members[i]`` at the rational prime below
    ``bounds[i]`` and to L everywhere else.

    ``members[i]`` must lie between ``bounds[i] L`` and
    ``conj(bounds[i])^-1 L`` and differ from L only at that prime. The
    rational primes must be distinct.
    """
    parts = []
    for i, (member, bound) in enumerate(zip(members, bounds)):
        window = bound.conj().inverse()
        for j, other in enumerate(bounds):
            if j != i:
                window = window * other
        parts.append(intersect(member, scale_by_ideal(window, L)))
    M = parts[0]
    for part in parts[1:]:
        M = lattice_sum(M, part)
    return M


def special_genera(
    L: HermLattice,
    prime_bound: int = DEFAULT_PRIME_BOUND,
    verify: bool = True,
    classgroup: t.Optional[ClassGroup] = None,
) -> SpecialGeneraResult:
    """
    One lattice from every special genus in the genus of L.

    :raises PreconditionError: for rank below 2.
    :raises PrimeSearchError: when no generating primes exist below the
        bound.
    """
    if L.rank < 2:
        raise PreconditionError("L has rank %d < 2" % L.rank)
    G = genus_group(L, classgroup, prime_bound, verify)
    if G.order == 1:
        rep = Representative(L, (), G.identity, unit_ideal(L.field))
        return SpecialGeneraResult(G, [], [], [rep])

    gens = prime_search(L, G, prime_bound)
    orders = _relative_orders(G, [g for _, g in gens])
    chains = []
    for (prime, _), o in zip(gens, orders):
        chain = [L]
        previous = L
        for _ in range(1, o):
            nxt = neighbour(chain[-1], prime, avoid=previous, verify=verify)
            previous = chain[-1]
            chain.append(nxt)
        chains.append(chain)

    bounds = [
        ideal_pow(prime.ideal, o - 1) for (prime, _), o in zip(gens, orders)]

    reps = []
    for exps, label, index in representative_labels(G, gens, orders):
        M = _combine_chains(
            L, [chain[e] for chain, e in zip(chains, exps)], bounds)
        if verify:
            actual = index_ideal(L, M)
            if actual != index:
                raise VerificationError(
                    "Representative %r has index %r, expected %r"
                    % (exps, actual, index))
            for prime, _ in gens:
                if not same_local_invariants(L, M, prime.p):
                    raise VerificationError(
                        "Representative %r left the genus at %d"
                        % (exps, prime.p))
        reps.append(Representative(M, exps, label, index))

    labels = SortedSet(rep.label for rep in reps)
    if len(labels) != G.order or len(set(r.lattice for r in reps)) != G.order:
        raise VerificationError("Special genus representatives are not distinct")
    logger.info("Found %d special genus representatives", len(reps))
    return SpecialGeneraResult(G, gens, orders, reps)

