"""Download generator-matrix files from external classification data.

Every file is parsed before it is written, so a directory produced here only
holds loadable codes.
"""

import logging
from pathlib import Path
from typing import Sequence

import requests

from .codes import LinearCode, parse_generator_matrix
from .construct import CODE_FILE_SUFFIX
from .errors import QSDesignError

logger = logging.getLogger(__name__)

FETCH_TIMEOUT = 30


def fetch_code_file(url: str, dest: str | Path, timeout: float = FETCH_TIMEOUT) -> LinearCode:
    """Fetch one code file, validate it and write it to ``dest``.

    Raises:
        requests.exceptions.RequestException: On transport or HTTP errors.
        CodeParseError: If the body is not a valid generator matrix.
    """
    response = requests.get(url, timeout=timeout)
    response.raise_for_status()
    code = parse_generator_matrix(response.text, source=url)
    dest = Path(dest)
    dest.parent.mkdir(parents=True, exist_ok=True)
    dest.write_text(response.text, encoding="utf-8")
    logger.info(f"Fetched [{code.length},{code.dimension}] code from {url}")
    return code


def fetch_code_files(
    urls: Sequence[str], out_dir: str | Path, timeout: float = FETCH_TIMEOUT
) -> tuple[list[Path], list[tuple[str, str]]]:
    """Fetch each URL into ``out_dir`` as 00000.txt, 00001.txt, ... in URL order.

    Returns written paths and (url, error) pairs; a failed URL keeps its index
    so file names stay tied to positions in ``urls``.
    """
    out_dir = Path(out_dir)
    written = []
    failures = []
    for index, url in enumerate(urls):
        dest = out_dir / f"{index:05d}{CODE_FILE_SUFFIX}"
        try:
            fetch_code_file(url, dest, timeout)
            written.append(dest)
        except (requests.exceptions.RequestException, QSDesignError) as e:
            logger.warning(f"Failed to fetch {url}: {type(e).__name__}: {e}")
            failures.append((url, f"{type(e).__name__}: {e}"))
    return written, failures
