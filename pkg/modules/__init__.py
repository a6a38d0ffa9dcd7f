"""
ihx: Z/2 intersection homology of stratified simplicial pseudomanifolds
"""

import os

__version__ = '1.0.0'

ROOT_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

def getpath(path):
  """Absolute path of a repository-relative path such as '/config/app.cfg'"""
  return os.path.abspath(ROOT_DIR + path)
