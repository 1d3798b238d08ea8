import os
import sys

from dotenv import load_dotenv

# 添加项目根目录到Python路径
sys.path.insert(0, os.path.abspath(os.path.dirname(__file__)))

# 加载环境变量
load_dotenv()

from geowl.commands.router import main  # noqa: E402

if __name__ == "__main__":
    sys.exit(main())
