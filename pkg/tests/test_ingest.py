import pytest
import requests

from qsdesign import ingest
from qsdesign.construct import load_code_directory
from qsdesign.errors import CodeParseError

E8_TEXT = "8 4\n11110000\n00111100\n00001111\n01010101\n"


class FakeResponse:
    def __init__(self, text: str, status_code: int = 200):
        self.text = text
        self.status_code = status_code

    def raise_for_status(self):
        if self.status_code >= 400:
            raise requests.exceptions.HTTPError(f"{self.status_code} error")


@pytest.fixture
def fake_get(monkeypatch):
    pages = {
        "https://codes.test/e8": FakeResponse(E8_TEXT),
        "https://codes.test/broken": FakeResponse("8 1\n1111\n"),
        "https://codes.test/gone": FakeResponse("", status_code=404),
    }
    calls = []

    def get(url, timeout):
        calls.append((url, timeout))
        if url not in pages:
            raise requests.exceptions.ConnectionError(f"cannot reach {url}")
        return pages[url]

    monkeypatch.setattr(ingest.requests, "get", get)
    return calls


def test_fetch_code_file(tmp_path, fake_get, e8):
    dest = tmp_path / "sub" / "e8.txt"
    assert ingest.fetch_code_file("https://codes.test/e8", dest) == e8
    assert dest.read_text(encoding="utf-8") == E8_TEXT
    assert fake_get == [("https://codes.test/e8", ingest.FETCH_TIMEOUT)]


def test_malformed_body_is_not_written(tmp_path, fake_get):
    dest = tmp_path / "bad.txt"
    with pytest.raises(CodeParseError):
        ingest.fetch_code_file("https://codes.test/broken", dest)
    assert not dest.exists()


def test_fetch_code_files_keeps_url_positions(tmp_path, fake_get):
    urls = [
        "https://codes.test/gone",
        "https://codes.test/e8",
        "https://codes.test/broken",
        "https://unreachable.test/x",
    ]
    written, failures = ingest.fetch_code_files(urls, tmp_path)
    assert [p.name for p in written] == ["00001.txt"]
    assert [url for url, _ in failures] == [urls[0], urls[2], urls[3]]
    assert failures[0][1].startswith("HTTPError:")
    assert failures[2][1].startswith("ConnectionError:")
    loaded, bad = load_code_directory(tmp_path)
    assert [code_id for code_id, _ in loaded] == ["00001"] and bad == []
