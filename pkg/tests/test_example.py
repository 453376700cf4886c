"""End to end run of ``herm-genus special-genera`` on the bundled example."""
import json

from hermgenus.cli.main import main
from hermgenus.genus import is_neighbour
from hermgenus.ideal import prime_decomposition
from hermgenus.lattice import index_ideal, scale, volume_ideal
from hermgenus.local import same_local_invariants
from hermgenus.parse import parse_lattice, read_lattice

from .conftest import data_path


def test_special_genera_example(capsys):
    path = data_path("example.json")
    assert main(["--format", "json", "special-genera", path]) == 0
    doc = json.loads(capsys.readouterr().out)

    L = read_lattice(path)
    P3, P3bar = prime_decomposition(L.field, 3)
    ratio = P3.ideal / P3bar.ideal

    reps = [parse_lattice(r["lattice"]) for r in doc["representatives"]]
    assert len(reps) == 4
    assert len({M.key() for M in reps}) == 4
    for e, M in enumerate(reps):
        assert index_ideal(L, M) == ratio ** e
        assert scale(M) == scale(L)
        assert volume_ideal(M) == volume_ideal(L) * ratio ** e
        for p in (2, 3, 17):
            assert same_local_invariants(L, M, p)
    for M, N in zip(reps, reps[1:]):
        assert is_neighbour(M, N, P3)
