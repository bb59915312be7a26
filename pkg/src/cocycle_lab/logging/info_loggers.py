# MIT License

# Copyright (c) 2024 The cocycle_lab Authors

# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:

# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.

# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
# IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
# FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
# AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
# LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING FROM,
# OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS IN THE
# SOFTWARE.

import os
import time
from dataclasses import dataclass, field
from typing import Optional

import git
import xxhash


@dataclass(init=False)
class GeneralConfigLogger:
    """Logger for the run parameters.

    Attributes:
        cocycle_lab_sha (str): Current commit sha of the package sources, None outside a git checkout.
        cocycle_lab_version (str): Installed package version.
        command (str): Study that was run.
        config (dict): The resolved run configuration.
        start_time (float): Start time of the run. Logged at class init.
        end_time (float): End time of the run. Logged when calling [`GeneralConfigLogger.log_end_time`]
        total_run_time_secondes (str): Inferred total run time in seconds (from the start and end times).
    """

    cocycle_lab_sha: Optional[str] = None
    cocycle_lab_version: Optional[str] = None
    command: Optional[str] = None
    config: Optional[dict] = None
    start_time: Optional[float] = None
    end_time: Optional[float] = None
    total_run_time_secondes: Optional[str] = None

    def __init__(self) -> None:
        """Stores the current commit for reproducibility, and starts the run timer."""
        from cocycle_lab import __version__

        try:
            repo = git.Repo(os.path.dirname(__file__).split("src")[0], search_parent_directories=True)
            self.cocycle_lab_sha = repo.git.rev_parse("HEAD")
        except (git.InvalidGitRepositoryError, git.NoSuchPathError, git.GitCommandError):
            self.cocycle_lab_sha = None
        self.cocycle_lab_version = __version__
        self.command = None
        self.config = None
        self.end_time = None
        self.total_run_time_secondes = None
        self.start_time = time.perf_counter()

    def log_config(self, command: str, config: dict) -> None:
        self.command = command
        self.config = config

    def log_end_time(self) -> None:
        self.end_time = time.perf_counter()
        self.total_run_time_secondes = str(self.end_time - self.start_time)


@dataclass
class ResultsLogger:
    """Fingerprints of the written results.

    Attributes:
        path (str): Result file.
        format (str): `csv` or `json`.
        hash_result (str): xxh64 of the result file bytes. Two runs with the same configuration produce the same hash.
        row_count (int): Number of rows of the tabular part of the result.
    """

    path: Optional[str] = None
    format: Optional[str] = None
    hash_result: str = ""
    row_count: int = 0
    summary: dict = field(default_factory=dict)

    def log(self, path: str, fmt: str, content: str, row_count: int, summary: dict) -> None:
        self.path = path
        self.format = fmt
        self.hash_result = xxhash.xxh64(content.encode("utf-8")).hexdigest()
        self.row_count = row_count
        self.summary = summary
