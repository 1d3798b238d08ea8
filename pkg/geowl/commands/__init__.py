"""CLI 子命令, 每个模块提供 register 与 run"""
