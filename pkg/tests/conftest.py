import os

import hypothesis
import pytest
from click.testing import CliRunner

from src.app import create_app
from src.config.settings import TestingConfig
from src.models.family import DoubleFamily, IndexedFamily
from src.models.topology import Box, FiniteSpace, ProductInstance
from src.services.generator_service import CATALOG, GeneratorService

hypothesis.settings.register_profile("dev", max_examples=50, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=300, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "dev"))


@pytest.fixture
def settings():
    return TestingConfig


@pytest.fixture
def sierpinski():
    return FiniteSpace.from_lists(2, [[0], [0, 1]])


@pytest.fixture
def discrete2():
    return FiniteSpace.from_lists(2, [[0], [1], [0, 1]])


@pytest.fixture
def catalog_spaces():
    """Every distinct catalog space on at most three points"""
    spaces = []
    for catalog_id in sorted(CATALOG):
        for points in (1, 2, 3):
            space = GeneratorService.catalog_space(catalog_id, points)
            if space not in spaces:
                spaces.append(space)
    return spaces


@pytest.fixture
def worked_double_family():
    return DoubleFamily.from_lists(7, [[[0, 1], [0, 2], [0, 3]], [[0, 4], [0, 5], [0, 6]]])


@pytest.fixture
def worked_instance(sierpinski, discrete2):
    """Supports mirror worked_double_family; factor 0 is Sierpiński so A = {0} is centered"""
    factors = (sierpinski,) + (discrete2,) * 6
    boxes = (
        Box.of({0: 0, 1: 0}), Box.of({0: 1, 2: 1}), Box.of({0: 0, 3: 2}),
        Box.of({0: 1, 4: 0}), Box.of({0: 0, 5: 1}), Box.of({0: 1, 6: 0}),
    )
    return ProductInstance(factors, boxes, (0, 3, 6))


@pytest.fixture
def small_family():
    return IndexedFamily.from_lists(5, [[1, 2], [1, 3], [2, 3], [1, 4]])


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def cli():
    return create_app("testing")
