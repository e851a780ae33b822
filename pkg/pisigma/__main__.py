import sys

from pisigma.cli import main

sys.exit(main())
