import sys

from app import cli_dispatch

if __name__ == '__main__':
    # Exit status: 0 ok, 1 usage, 2 runtime failure, 3 slope threshold exceeded
    sys.exit(cli_dispatch(sys.argv[1:]))
