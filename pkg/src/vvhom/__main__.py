import sys

from vvhom.lab.cli import main

sys.exit(main())
