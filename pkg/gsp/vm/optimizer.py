"""Check-skipping optimizer."""

import dataclasses
import logging

from gsp.vm.instructions import Entry, Instr, Op
from gsp.vm.module import BytecodeModule

logger = logging.getLogger(__name__)


def _retarget(ins: Instr) -> Instr:
    if ins.op is Op.INVOKE_FUNCTION and ins.args[3]:
        return Instr(ins.op, ins.args[:2] + (Entry.FAST,) + ins.args[3:])
    if ins.op is Op.INVOKE_METHOD and ins.args[5]:
        return Instr(ins.op, ins.args[:4] + (Entry.FAST,) + ins.args[5:])
    return ins


def optimize(module: BytecodeModule) -> BytecodeModule:
    """Send statically strict call edges past the callee's CHECK_ARGS prologue.

    Returns a new module; the input is left untouched.
    """
    functions = [dataclasses.replace(f, code=[_retarget(ins) for ins in f.code]) for f in module.functions]
    retargeted = sum(
        1 for before, after in zip(module.functions, functions) for a, b in zip(before.code, after.code) if a != b
    )
    logger.debug("optimizer retargeted %d call edge(s)", retargeted)
    return dataclasses.replace(module, functions=functions, optimized=True)
