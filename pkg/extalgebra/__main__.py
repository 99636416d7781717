from extalgebra.cli import cli

if __name__ == "__main__":
    # If being called as a module, run as command line tool
    cli()
