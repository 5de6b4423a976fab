import json
import os
from typing import Any

import aiofiles

SCHEDULE_TEMPLATE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "schedule_template.json")


async def read_json(path: str) -> Any:
    async with aiofiles.open(path, 'r', encoding='utf-8') as f:
        return json.loads(await f.read())


async def load_schedule_template() -> dict[str, Any]:
    return await read_json(SCHEDULE_TEMPLATE)


async def write_json(path: str, document: Any):
    # sorted keys keep repeated runs byte-identical
    async with aiofiles.open(path, 'w', encoding='utf-8') as f:
        await f.write(json.dumps(document, indent=2, sort_keys=True, ensure_ascii=False) + "\n")


async def write_text(path: str, text: str):
    async with aiofiles.open(path, 'w', encoding='utf-8') as f:
        await f.write(text)
