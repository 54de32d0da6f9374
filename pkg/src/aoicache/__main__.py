import sys

from aoicache.cli import main

sys.exit(main())
