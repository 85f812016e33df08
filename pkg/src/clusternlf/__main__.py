import sys

from clusternlf.cli import main

sys.exit(main())
