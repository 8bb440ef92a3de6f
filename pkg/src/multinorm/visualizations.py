"""
Visualization module for Kummer families.

This module provides functions to create:
- A heatmap of the intersection exponents e_{i,j}
- The refinement chart: number of l-equivalence classes of each U_r as l grows

Author: Mounia Tonazzini
Date: October 2026
"""

import os
import logging

import matplotlib.pyplot as plt
import pandas as pd
import seaborn as sns

from multinorm.kummer import EquivalenceStructure

logger = logging.getLogger(__name__)

# Set style for all plots
sns.set_style("whitegrid")
plt.rcParams['font.size'] = 10


class FamilyVisualizer:
    """
    Class for creating visualizations of the combinatorics of a family.

    Attributes:
        - structure (EquivalenceStructure): Combinatorics of a normalized family.
        - family_label (str): Title used in the figures.
    """

    def __init__(self, structure: EquivalenceStructure, family_label: str = "Kummer family"):
        self.structure = structure
        self.family_label = family_label

    def refinement_frame(self) -> pd.DataFrame:
        """
        Returns one row per (r, l) with the number of l-equivalence classes of U_r.

        Returns:
            pd.DataFrame: columns r, l, classes, size.
        """

        rows = []
        for (r, l), classes in sorted(self.structure.classes.items()):
            rows.append({"r": r, "l": l, "classes": len(classes), "size": len(self.structure.u_partition[r])})
        return pd.DataFrame(rows, columns=["r", "l", "classes", "size"])

    def _finish(self, fig, save_path: str | None) -> None:
        plt.tight_layout()
        if save_path:
            fig.savefig(save_path, dpi=150, bbox_inches='tight')
            logger.info(f"Figure saved to {save_path}")
        else:
            plt.show()
        plt.close(fig)

    def plot_intersection_heatmap(self, save_path: str | None = None) -> None:
        """
        Heatmap of e_{i,j}, the diagonal holds eps_i.

        Args: save_path (str, optional): Path to save the figure. If None, displays the plot.
        """

        df = self.structure.to_frame()
        fig, ax = plt.subplots(figsize=(1.2 * len(df) + 3, 1.0 * len(df) + 2))
        sns.heatmap(df, annot=True, fmt="d", cmap="YlGnBu", cbar_kws={"label": "e_ij"},
                    vmin=0, vmax=self.structure.n, ax=ax)
        ax.set_title(f"Intersection exponents - {self.family_label}", fontweight='bold')
        self._finish(fig, save_path)

    def plot_refinement(self, save_path: str | None = None) -> None:
        """
        Number of l-equivalence classes of each U_r against l.

        Args: save_path (str, optional): Path to save the figure. If None, displays the plot.
        """

        df = self.refinement_frame()
        fig, ax = plt.subplots(figsize=(8, 5))
        if df.empty:
            ax.text(0.5, 0.5, "single field: no U_r", ha="center", va="center")
        else:
            df["U_r"] = df["r"].map(lambda r: f"U_{r}")
            sns.lineplot(data=df, x="l", y="classes", hue="U_r", marker="o", ax=ax)
            ax.set_xticks(range(int(df["l"].min()), self.structure.n + 1))
        ax.set_xlabel("l", fontweight='bold')
        ax.set_ylabel("number of l-classes", fontweight='bold')
        ax.set_title(f"Refinement of U_r - {self.family_label}", fontweight='bold')
        self._finish(fig, save_path)

    def create_all_plots(self, output_dir: str = "output") -> list[str]:
        """
        Creates all the figures and saves them in the output directory.

        Returns:
            list[str]: Paths of the saved figures.
        """

        os.makedirs(output_dir, exist_ok=True)
        paths = [
            os.path.join(output_dir, "intersection_heatmap.png"),
            os.path.join(output_dir, "refinement.png"),
        ]
        self.plot_intersection_heatmap(save_path=paths[0])
        self.plot_refinement(save_path=paths[1])
        return paths
