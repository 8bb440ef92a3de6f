"""
Rule catalogue module for loading the sufficient conditions of the Hasse
norm principle from a JSON configuration file and providing access to:
- the condition of each rule,
- the rules of a given case,
- a printable listing.

Author: Mounia Tonazzini
Date: October 2026
"""

import json
from pathlib import Path
from typing import Any

from multinorm.exceptions import RuleCatalogueError

RULE_ORDER = ("1a", "1b", "1c", "1d", "1e", "2a", "2b", "2c", "2d", "3a", "3b", "3c")


class RuleCatalogue:
    """
    Class to load and query the HNP rule catalogue.
    """

    def __init__(self):
        self.data = self._load_json()

    def _load_json(self) -> dict[str, Any]:
        """
        Loads the rule catalogue JSON file.

        Returns: dict: Data from the JSON file.

        Raises:
            - FileNotFoundError: If the JSON file does not exist.
            - RuleCatalogueError: If the JSON is poorly formatted or a rule is missing.
        """

        json_file_name = "hnp_rules.json"
        base_dir = Path(__file__).resolve().parent  # multinorm folder
        data_path = base_dir / "data" / json_file_name

        if not data_path.exists():
            raise FileNotFoundError(
                f"The file {json_file_name} was not found. "
                "Ensure that hnp_rules.json is in the 'data/' folder."
            )

        try:
            with open(data_path, "r", encoding="utf-8") as f:
                rules_dict = json.load(f)
        except json.JSONDecodeError as e:
            raise RuleCatalogueError(f"Invalid JSON format in {data_path}: {e}") from e

        missing = [rule_id for rule_id in RULE_ORDER if rule_id not in rules_dict.get("rules", {})]
        if missing:
            raise RuleCatalogueError(f"Rules missing from {json_file_name}: {', '.join(missing)}")
        return rules_dict

    def get_rule_ids(self) -> list[str]:
        """Returns the rule ids in catalogue order."""
        return [rule_id for rule_id in RULE_ORDER]

    def rule_exists(self, rule_id: str) -> bool:
        return rule_id.lower() in self.data["rules"]

    def get_rule(self, rule_id: str) -> dict[str, Any]:
        """
        Returns the entry of one rule (case, condition, source).

        Raises: RuleCatalogueError: if the rule is missing
        """

        rule_id_lower = rule_id.lower()
        if rule_id_lower not in self.data["rules"]:
            raise RuleCatalogueError(f"Rule '{rule_id}' not found in the catalogue.")
        return self.data["rules"][rule_id_lower]

    def rules_for_case(self, case: int) -> list[str]:
        """
        Returns the ids of the rules of one case (1: one field, 2: two fields, 3: general).

        An unknown case gives an empty list.
        """

        return [rule_id for rule_id in RULE_ORDER if self.data["rules"][rule_id]["case"] == case]

    def get_rule_summary(self, rule_id: str) -> str:
        """Returns a one-line summary for display in the CLI."""
        rule = self.get_rule(rule_id)
        return f"({rule_id}) {rule['condition']} [{rule['source']}]"
