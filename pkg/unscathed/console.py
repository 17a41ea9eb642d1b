from rich.console import Console

console = Console()

# Global flags
quiet = False
verbose = False
