"""Regenerate docs/openapi.json from the live route definitions.

The committed document is the published API description; a test fails
when it drifts from the code. Run this after changing any route.
"""

from __future__ import annotations

import json
import tempfile
from pathlib import Path

from triz_workbench.api import ApiSettings, create_app
from triz_workbench.config import StorageConfig
from triz_workbench.gateway import FakeBackend, Gateway

REPO = Path(__file__).resolve().parent.parent
OUT = REPO / "docs" / "openapi.json"


def main() -> None:
    with tempfile.TemporaryDirectory() as scratch:
        app = create_app(
            ApiSettings(storage=StorageConfig(root=Path(scratch))),
            gateway=Gateway(FakeBackend(respond=lambda r: "")),
        )
        doc = app.openapi()
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(
        json.dumps(doc, indent=1, sort_keys=True, ensure_ascii=False) + "\n",
        encoding="utf-8",
    )
    print(f"wrote {OUT} ({OUT.stat().st_size} bytes)")


if __name__ == "__main__":
    main()
