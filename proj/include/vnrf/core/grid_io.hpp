#ifndef VNRF_CORE_GRID_IO_HPP
#define VNRF_CORE_GRID_IO_HPP

// VNRF1 text grids: header line, metadata line, then one lattice row per line.

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vnrf/core/lattice.hpp"

namespace vnrf
{

inline void write_grid(std::ostream& os, const Configuration& c)
{
    if (c.boundary().kind == BoundaryKind::fixed)
        throw std::invalid_argument("VNRF1 cannot store a fixed boundary");
    const Window& w = c.window();
    os << "VNRF1\n";
    os << "d=" << w.dim() << " dims=" << w.shape() << " alphabet=" << c.alphabet().size()
       << " boundary=" << to_string(c.boundary()) << '\n';
    const std::size_t row = static_cast<std::size_t>(w.extent(w.dim() - 1));
    std::string line;
    for (std::size_t s = 0; s < c.size(); s += row) {
        line.clear();
        for (std::size_t k = 0; k < row; ++k) {
            if (k) line += ' ';
            line += std::to_string(int(c[s + k]));
        }
        line += '\n';
        os << line;
    }
}

inline Configuration read_grid(std::istream& is)
{
    std::string line;
    if (!std::getline(is, line) || line != "VNRF1") throw std::runtime_error("grid: missing VNRF1 magic line");
    if (!std::getline(is, line)) throw std::runtime_error("grid: missing header line");

    int d = 0, alphabet = 0;
    std::string dims, boundary;
    std::istringstream hs(line);
    std::string tok;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw std::runtime_error("grid: malformed header token '" + tok + "'");
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        try {
            if (key == "d") d = std::stoi(val);
            else if (key == "dims") dims = val;
            else if (key == "alphabet") alphabet = std::stoi(val);
            else if (key == "boundary") boundary = val;
            else throw std::runtime_error("grid: unknown header key '" + key + "'");
        } catch (const std::logic_error&) {
            throw std::runtime_error("grid: bad value for '" + key + "'");
        }
    }
    if (dims.empty() || boundary.empty() || d == 0 || alphabet == 0)
        throw std::runtime_error("grid: header must define d, dims, alphabet and boundary");

    std::vector<int> extents;
    std::istringstream ds(dims);
    while (std::getline(ds, tok, 'x')) {
        try {
            extents.push_back(std::stoi(tok));
        } catch (const std::logic_error&) {
            throw std::runtime_error("grid: bad dims '" + dims + "'");
        }
    }
    if (static_cast<int>(extents.size()) != d) throw std::runtime_error("grid: dims do not match d");

    Boundary b;
    if (boundary == "free") b = Boundary::free();
    else if (boundary == "periodic") b = Boundary::periodic();
    else throw std::runtime_error("grid: unsupported boundary '" + boundary + "'");

    Window w(extents);
    const std::size_t row = static_cast<std::size_t>(extents.back());
    std::vector<Symbol> symbols;
    symbols.reserve(w.size());
    std::size_t lineno = 2;
    while (symbols.size() < w.size() && std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        int v;
        std::size_t count = 0;
        while (ls >> v) {
            if (v < 0 || v >= alphabet)
                throw std::runtime_error("grid: symbol out of range on line " + std::to_string(lineno));
            symbols.push_back(static_cast<Symbol>(v));
            ++count;
        }
        if (!ls.eof()) throw std::runtime_error("grid: non-integer token on line " + std::to_string(lineno));
        if (count != row)
            throw std::runtime_error("grid: line " + std::to_string(lineno) + " has " + std::to_string(count) +
                                     " symbols, expected " + std::to_string(row));
    }
    if (symbols.size() != w.size()) throw std::runtime_error("grid: truncated symbol data");
    return Configuration(w, Alphabet(alphabet), b, std::move(symbols));
}

inline void save_grid(const std::string& path, const Configuration& c)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    write_grid(os, c);
}

inline Configuration load_grid(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    return read_grid(is);
}

} // namespace vnrf

#endif
