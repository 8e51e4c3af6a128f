import sys

from singularity_metric.cli import main

sys.exit(main())
