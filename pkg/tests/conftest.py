from __future__ import annotations

from pathlib import Path

import pytest

from semsim import MeasureConfig, Taxonomy, load_taxonomy

DATA = Path(__file__).parent / "data"

RIVER = "river#n#1"
CANAL = "canal#n#1"
WATERWAY = "waterway#n#1"
BUILDING = "building#n#1"
HOTEL = "hotel#n#1"
MOTEL = "motel#n#1"
ENTITY = "entity#n#1"

MICRO_SENSES = (ENTITY, WATERWAY, RIVER, CANAL, BUILDING, HOTEL, MOTEL)


@pytest.fixture(scope="session")
def micro_taxonomy() -> Taxonomy:
    return load_taxonomy(DATA / "micro_taxonomy.tsv")


@pytest.fixture(scope="session")
def config() -> MeasureConfig:
    return MeasureConfig()


@pytest.fixture
def fixture_paths() -> dict[str, Path]:
    return {
        "taxonomy": DATA / "micro_taxonomy.tsv",
        "pairs": DATA / "micro_pairs.csv",
        "mapping": DATA / "micro_mapping.csv",
        "responses": DATA / "micro_responses.csv",
    }
