import sys

from cyquot.main import main

sys.exit(main())
