import logging
from collections.abc import Callable

import numpy as np
import pytest

from app.core.config import logger
from app.schemas.array import AngleGrid, ArrayGeometry
from app.schemas.channel import RicianFactor, UserChannel
from app.services.channel import draw_user_channel

# Set logger to DEBUG for tests
logger.setLevel(logging.DEBUG)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240501)


@pytest.fixture
def bs() -> ArrayGeometry:
    return ArrayGeometry(num_elements=32)


@pytest.fixture
def ue() -> ArrayGeometry:
    return ArrayGeometry(num_elements=8)


@pytest.fixture
def grid() -> AngleGrid:
    return AngleGrid(num_points=180)


@pytest.fixture
def make_users(rng: np.random.Generator) -> Callable[..., list[UserChannel]]:
    """Factory drawing i.i.d.-scattering users, optionally at fixed LOS angles."""

    def factory(
        bs: ArrayGeometry,
        ue: ArrayGeometry,
        num_users: int,
        kappa: float = 2.0,
        theta: list[float] | None = None,
        phi: list[float] | None = None,
    ) -> list[UserChannel]:
        rician = RicianFactor(kappa=kappa)
        return [
            draw_user_channel(
                bs,
                ue,
                rician,
                rng,
                theta=None if theta is None else theta[k],
                phi=None if phi is None else phi[k],
            )
            for k in range(num_users)
        ]

    return factory
