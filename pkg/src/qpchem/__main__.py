import sys

from qpchem.cli import main

sys.exit(main())
