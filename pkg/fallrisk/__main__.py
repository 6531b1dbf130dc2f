# Copyright (c) The fallrisk developers.
# Licensed under the MIT License.

import sys

from fallrisk.cli import main

if __name__ == "__main__":
    sys.exit(main())
