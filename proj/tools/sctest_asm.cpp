// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

// Assembles a bundle directory's contract.asm into contract.hex and linemap.json,
// or prints a disassembly of an existing bundle.

#include <sctest/bytecode/assembler.hpp>
#include <sctest/bytecode/bundle.hpp>
#include <sctest/common/error.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace sctest;

namespace
{
void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream out{p, std::ios::binary};
    if (!out)
        throw Error(ErrorCode::BundleLoad, "cannot write " + p.string());
    out << text;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"sctest-asm: assemble fixture bundles"};
    std::vector<std::string> dirs;
    bool disasm = false;
    app.add_option("bundles", dirs, "bundle directories containing contract.asm")->required();
    app.add_flag("--disasm", disasm, "print the disassembly instead of assembling");
    CLI11_PARSE(app, argc, argv);

    try
    {
        for (const auto& d : dirs)
        {
            const fs::path dir{d};
            if (disasm)
            {
                const auto bundle = bytecode::load_bundle(dir);
                for (const auto& ins : bundle.program->instructions())
                    std::cout << bytecode::disassemble_line(ins) << "\n";
                continue;
            }
            const auto a = bytecode::assemble(bytecode::read_text_file(dir / "contract.asm"));
            write_file(dir / "contract.hex", to_hex(a.code) + "\n");
            nlohmann::ordered_json lm = nlohmann::ordered_json::object();
            for (const auto& [off, line] : a.linemap)
                lm[std::to_string(off)] = line;
            write_file(dir / "linemap.json", lm.dump(1) + "\n");
            std::cout << dir.string() << ": " << a.code.size() << " bytes\n";
        }
    }
    catch (const Error& e)
    {
        std::cerr << "sctest-asm: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
