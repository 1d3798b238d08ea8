"""
geowl - 几何点云颜色细化工具包
以确定性的哈希多重集编码实现 DisGNN / GeoNGNN / DimeNet 式不变模型的最强表达形式
"""

__version__ = "0.3.0"
