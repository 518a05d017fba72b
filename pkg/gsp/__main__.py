"""Allow ``python -m gsp``."""

import sys

from gsp.cli import main

sys.exit(main())
