import sys

from narayana_repdigits.cli import main

sys.exit(main())
