"""Write the service's OpenAPI description to openapi.json.

Run from the repository root after changing any route or request model:

    python3 scripts/export_openapi.py
"""

import json
import tempfile
from pathlib import Path

from robaudit.api import create_app

TARGET = Path(__file__).resolve().parent.parent / "openapi.json"


def main() -> None:
    with tempfile.TemporaryDirectory() as store_dir:
        schema = create_app(store_dir).openapi()
    TARGET.write_text(
        json.dumps(schema, ensure_ascii=False, indent=2, sort_keys=True)
        + "\n",
        encoding="utf-8")
    print(f"wrote {TARGET} ({len(schema['paths'])} paths)")


if __name__ == "__main__":
    main()
