import sys

from cmlt.cli import main

sys.exit(main())
