import os
import sys

# Force UTF-8 encoding for stdout/stderr so witness glyphs print on Windows
if sys.platform == "win32":
    os.environ["PYTHONIOENCODING"] = "utf-8"

from cmlt.cli import main

if __name__ == "__main__":
    sys.exit(main())
