import sys

from contscope.cli import main

sys.exit(main())
