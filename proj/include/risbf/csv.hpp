// SPDX-License-Identifier: Apache-2.0
//
// risbf - joint active/passive beamforming for RIS-aided MIMO links
// Copyright (C) 2026 The risbf authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RISBF_CSV_HPP
#define RISBF_CSV_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace risbf
{
    // Shortest decimal text that reads back to the same double; "nan" / "inf" / "-inf" otherwise.
    std::string format_double(double v);

    // Strict number parsing: the whole (trimmed) token must be consumed.
    double parse_double(const std::string &text, const std::string &field);
    long long parse_integer(const std::string &text, const std::string &field);

    std::vector<std::string> split_list(const std::string &text, char sep = ',');

    // Minimal CSV table: header plus rows of plain (unquoted) cells.
    struct CsvTable
    {
        std::vector<std::string> header;
        std::vector<std::vector<std::string>> rows;

        // Index of `name` in the header; throws IoError naming a missing column.
        std::size_t column(const std::string &name) const;
    };

    void write_csv(std::ostream &os, const CsvTable &table);
    CsvTable read_csv(std::istream &is);

    // Writes atomically enough for our use: opens, writes, checks the stream. Throws IoError.
    void write_csv_file(const std::string &path, const CsvTable &table);
    CsvTable read_csv_file(const std::string &path);
}

#endif
