import sys

from pulsefisher.cli import main

sys.exit(main())
