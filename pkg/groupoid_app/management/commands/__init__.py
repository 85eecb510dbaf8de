"""群胚计算命令包"""
