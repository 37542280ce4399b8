import sys

from eplib.cli import main


sys.exit(main())
