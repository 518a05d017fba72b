"""Bytecode compiler, optimizer and interpreter."""

from gsp.runtime.metrics import Metrics
from gsp.vm.compiler import compile_program
from gsp.vm.disassembler import dump_code, dump_module
from gsp.vm.instructions import Entry, Instr, Op
from gsp.vm.interpreter import ExecutionResult, VirtualMachine, execute
from gsp.vm.module import BytecodeModule, CodeObject
from gsp.vm.optimizer import optimize

__all__ = [
    "BytecodeModule",
    "CodeObject",
    "Entry",
    "ExecutionResult",
    "Instr",
    "Metrics",
    "Op",
    "VirtualMachine",
    "compile_program",
    "dump_code",
    "dump_module",
    "execute",
    "optimize",
]
