import numpy as np
import pytest

from qpure import matcore as mc
from qpure.rng import Xoshiro256, random_unit_vector, random_unitary
from qpure.setanalysis import EssentiallyPureRecipe
from qpure.states import DensityOperator, random_density

_RESULTS = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_RESULTS] = {}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, {})
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(results, key=lambda k: int(k.split()[0][2:])):
        ok, detail = results[key]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {key}: {detail}")


@pytest.fixture
def acceptance(request):
    """Record one criterion's outcome for the end-of-run summary."""

    def record(name: str, ok: bool, detail: str = ""):
        request.config.stash[_RESULTS][name] = (bool(ok), detail)
        print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")

    return record


def random_pair(seed: int, max_dim: int = 6, max_rank: int = 3):
    """Two random states of a common random dimension (deterministic in seed)."""
    gen = Xoshiro256(10_000 + seed)
    dim = 2 + int(gen.uniform() * (max_dim - 1))
    r1 = 1 + int(gen.uniform() * min(max_rank, dim))
    r2 = 1 + int(gen.uniform() * min(max_rank, dim))
    return random_density(dim, r1, 2 * seed), random_density(dim, r2, 2 * seed + 1)


def random_recipe(seed: int, n_vectors: int = 2, max_factor: int = 4) -> EssentiallyPureRecipe:
    """Consistent essentially-pure recipe; ``dim_C > 1`` for odd seeds.

    Even seeds: H_in = A (x) B with a Haar-random U.  Odd seeds: H_in = A (x) B0
    and B = B0 (x) C, U = U0 (x) 1_C, sigma_B = sigma0 (x) omega_C.
    """
    gen = Xoshiro256(20_000 + seed)
    a = 2 + int(gen.uniform() * (max_factor - 1))
    b0 = 2 + int(gen.uniform() * (max_factor - 1))
    rank_b = 1 + int(gen.uniform() * b0)
    vecs = tuple(random_unit_vector(a, 1000 * seed + j) for j in range(n_vectors))
    sigma0 = random_density(b0, rank_b, 30_000 + seed)
    u0 = random_unitary(a * b0, 40_000 + seed)
    if seed % 2 == 0:
        return EssentiallyPureRecipe(
            dim_in=a * b0, dim_A=a, dim_B=b0, dim_C=1, U=u0,
            sigma_B=sigma0, omega_C=DensityOperator([[1.0]]), pure_vectors=vecs,
        )
    c = 2
    omega = random_density(c, 1 + (seed // 2) % 2, 50_000 + seed)
    return EssentiallyPureRecipe(
        dim_in=a * b0, dim_A=a, dim_B=b0 * c, dim_C=c,
        U=np.kron(u0, mc.identity(c)),
        sigma_B=DensityOperator(np.kron(sigma0.matrix, omega.matrix)),
        omega_C=omega, pure_vectors=vecs,
    )
