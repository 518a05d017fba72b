"""Text listing of compiled modules (the ``dump-bc`` format)."""

from typing import List

from gsp.vm.module import BytecodeModule, CodeObject


def dump_code(code: CodeObject) -> str:
    lines = [f"def {code.name} nlocals={code.nlocals} fast={code.fast_entry}"]
    lines.extend(f"{offset}: {ins}" for offset, ins in enumerate(code.code))
    return "\n".join(lines)


def dump_module(module: BytecodeModule) -> str:
    """One section per code object, in function-id order, separated by blank lines."""
    sections: List[str] = [dump_code(code) for code in module.functions]
    return "\n\n".join(sections) + "\n"
