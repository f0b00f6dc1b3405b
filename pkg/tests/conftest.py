from __future__ import annotations

from pathlib import Path

import pytest

from semdiff.parsing import parse_ad, parse_cd, parse_od

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def cd_v1():
    return parse_cd(fixture_text("cd_v1.cd"))


@pytest.fixture(scope="session")
def cd_v2():
    return parse_cd(fixture_text("cd_v2.cd"))


@pytest.fixture(scope="session")
def om1():
    return parse_od(fixture_text("om1.od"))


@pytest.fixture(scope="session")
def om2():
    return parse_od(fixture_text("om2.od"))


@pytest.fixture(scope="session")
def empty_om():
    return parse_od(fixture_text("empty.od"))


@pytest.fixture(scope="session")
def ad_v1():
    return parse_ad(fixture_text("ad_v1.ad"))


@pytest.fixture(scope="session")
def ad_v2():
    return parse_ad(fixture_text("ad_v2.ad"))


@pytest.fixture(scope="session")
def ad_v3():
    return parse_ad(fixture_text("ad_v3.ad"))
