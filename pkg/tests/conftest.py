from pathlib import Path

import pytest

from cohomotopy.database import load_db

DB_PATH = Path(__file__).resolve().parents[1] / "src" / "cohomotopy" / "data" / "paper.cohdb"


@pytest.fixture(scope="session")
def db():
    return load_db(DB_PATH)


@pytest.fixture(scope="session")
def db_text():
    return DB_PATH.read_text()
