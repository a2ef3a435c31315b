"""Main entry point for the FlipIt simulation lab.

Without arguments the command-line help is shown; otherwise the arguments
are handed to the CLI.
"""
import sys


def main():
    """Run the command-line interface and exit with its status code."""
    from cli import main as cli_main
    sys.exit(cli_main(sys.argv[1:] or ['--help']))


if __name__ == "__main__":
    main()
