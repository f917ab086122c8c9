import sys

from cyclomax.cli import main

sys.exit(main())
