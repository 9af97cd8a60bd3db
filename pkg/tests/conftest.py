from pathlib import Path

import pytest

from travelwtp.config import DATA_DIR
from travelwtp.estimation import AcceptanceGroup
from travelwtp.ingestion import read_population_csv, read_survey_csv

TABLE1_CSV = DATA_DIR / "sanmarcos_table1.csv"
SURVEY_CSV = DATA_DIR / "sanmarcos_survey.csv"
SANMARCOS_CFG = DATA_DIR / "sanmarcos.cfg"

SANMARCOS_GROUPS = [(121, 82), (14, 10), (14, 9), (9, 4), (5, 4), (4, 3)]
SANMARCOS_WEIGHT = 78_160 / 172


@pytest.fixture
def table1_bands():
    return read_population_csv(TABLE1_CSV)


@pytest.fixture
def survey():
    return read_survey_csv(SURVEY_CSV)


@pytest.fixture
def sanmarcos_groups():
    return [AcceptanceGroup(n, k, 4.7831196) for n, k in SANMARCOS_GROUPS]


def write(tmp_path: Path, name: str, text: str) -> Path:
    p = tmp_path / name
    p.write_text(text)
    return p


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
