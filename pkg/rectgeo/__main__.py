import sys

from rectgeo.cli import main

sys.exit(main())
