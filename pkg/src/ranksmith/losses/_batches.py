import numpy as np


def random_batch(rng, *, size=8, dim=16, tau=0.1, n_years=3):
    """
    A random batch whose similarity gaps are on the scale of ``tau``.

    Items are noisy copies of one direction, with the noise sized so that the sigmoid terms
    are neither all saturated nor all flat.
    """
    base = rng.normal(size=dim)
    base /= np.linalg.norm(base)
    spread = np.sqrt(tau / 1.6)
    embeddings = base + spread * rng.normal(size=(size, dim))
    years = 1950 + rng.integers(0, n_years, size=size)
    return embeddings, years


def separated_query_batch(rng, *, size=10, first_year=1930, n_years=30):
    """
    A batch whose candidate similarities to item 0 lie on a grid with spacing 0.02.

    Embeddings are 2-d with random norms, so only the angles set the similarities.
    """
    grid = np.linspace(-0.98, 0.98, 99)
    cosines = rng.choice(grid, size=size - 1, replace=False)
    angles = np.arccos(cosines) * rng.choice([-1.0, 1.0], size=size - 1)
    embeddings = np.vstack(
        [[1.0, 0.0], np.column_stack([np.cos(angles), np.sin(angles)])],
    ) * rng.uniform(0.5, 2.0, size=(size, 1))
    years = rng.integers(first_year, first_year + n_years, size=size)
    return embeddings, years
