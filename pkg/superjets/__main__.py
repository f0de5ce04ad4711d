import sys

from superjets.cli import main

sys.exit(main())
