import pytest

from ifcodec import build_cutoff, load_kernel, save_kernel


def _cached_kernel(pytestconfig, grid_step: float):
    cache_dir = pytestconfig.cache.mkdir("ifcodec")
    path = cache_dir / f"kernel_r60_h{grid_step:g}.npz"
    if path.is_file():
        try:
            kernel = load_kernel(path)
            if kernel.grid_step == grid_step and kernel.radius == 60.0:
                return kernel
        except Exception:
            path.unlink()
    kernel = build_cutoff(60.0, grid_step)
    save_kernel(kernel, path)
    return kernel


@pytest.fixture(scope="session")
def kernel(pytestconfig):
    """Radius-60 cut-off tables at the default step, cached across runs."""
    return _cached_kernel(pytestconfig, 1e-3)


@pytest.fixture(scope="session")
def kernel_half_step(pytestconfig):
    """Same tables at half the grid step, for stability/Richardson checks."""
    return _cached_kernel(pytestconfig, 5e-4)
