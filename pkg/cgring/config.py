import logging
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Mapping, Optional

logger = logging.getLogger(__name__)

DATA_DIR_ENV = "CG_DATA_DIR"
PACKAGE_DATA_DIR = Path(__file__).resolve().parent / "data"
TABLE_FILE = "cg_table.json"
GIAMBELLI_FILE = "cg_giambelli.json"


@dataclass(frozen=True)
class Settings:
    data_dir: Path
    table_file: Path
    giambelli_file: Path

    def with_files(
        self, table_file: Optional[str] = None, giambelli_file: Optional[str] = None
    ) -> "Settings":
        """Returns a copy with the given files, resolved against data_dir."""
        changes = {}
        if table_file is not None:
            changes["table_file"] = resolve(self.data_dir, table_file)
        if giambelli_file is not None:
            changes["giambelli_file"] = resolve(self.data_dir, giambelli_file)
        return replace(self, **changes)


def resolve(data_dir: Path, name: str) -> Path:
    path = Path(name)
    if path.is_absolute() or path.exists():
        return path
    return data_dir / path


def load_settings(environ: Optional[Mapping[str, str]] = None) -> Settings:
    environ = os.environ if environ is None else environ
    override = environ.get(DATA_DIR_ENV)
    data_dir = Path(override) if override else PACKAGE_DATA_DIR
    if override:
        logger.debug("data directory overridden by %s: %s", DATA_DIR_ENV, data_dir)
    return Settings(
        data_dir=data_dir,
        table_file=data_dir / TABLE_FILE,
        giambelli_file=data_dir / GIAMBELLI_FILE,
    )
