from dotenv import load_dotenv

load_dotenv()

from skyline_tools.config import SkylineConfig, load_config  # noqa: E402
from skyline_tools.errors import *  # noqa: E402, F403
from skyline_tools.geometry import *  # noqa: E402, F403
from skyline_tools.index import SkylineIndex  # noqa: E402
from skyline_tools.reduction import *  # noqa: E402, F403
from skyline_tools.structs import *  # noqa: E402, F403
from skyline_tools.succinct import *  # noqa: E402, F403
