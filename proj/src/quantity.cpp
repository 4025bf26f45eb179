// feberi: free-electron / bound-electron resonant-interaction simulation toolkit
// SPDX-License-Identifier: MIT

#include "feberi/quantity.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <map>
#include <stdexcept>

namespace feberi::physical {

namespace {

const std::map<std::string, double>& unit_table(Dimension dim) {
    static const std::map<std::string, double> energy{
        {"eV", 1.0}, {"meV", 1e-3}, {"keV", 1e3}, {"MeV", 1e6}};
    static const std::map<std::string, double> length{
        {"nm", 1.0},  {"pm", 1e-3}, {"um", 1e3},   {"mm", 1e6},
        {"cm", 1e7},  {"m", 1e9},   {"km", 1e12}};
    static const std::map<std::string, double> time{
        {"fs", 1.0}, {"as", 1e-3}, {"ps", 1e3}, {"ns", 1e6}, {"s", 1e15}};
    static const std::map<std::string, double> dipole{
        {"D", 1.0}, {"Debye", 1.0}, {"debye", 1.0}};
    static const std::map<std::string, double> frequency{
        {"rad/fs", 1.0}, {"rad/s", 1e-15}, {"1/fs", 1.0}, {"1/s", 1e-15}};
    static const std::map<std::string, double> angle{
        {"rad", 1.0}, {"deg", 0.017453292519943295}, {"pi", 3.141592653589793}};
    static const std::map<std::string, double> none{};
    switch (dim) {
    case Dimension::energy: return energy;
    case Dimension::length: return length;
    case Dimension::time: return time;
    case Dimension::dipole: return dipole;
    case Dimension::frequency: return frequency;
    case Dimension::angle: return angle;
    case Dimension::dimensionless: return none;
    }
    return none;
}

std::string dimension_name(Dimension dim) {
    switch (dim) {
    case Dimension::energy: return "energy";
    case Dimension::length: return "length";
    case Dimension::time: return "time";
    case Dimension::dipole: return "dipole moment";
    case Dimension::frequency: return "angular frequency";
    case Dimension::angle: return "angle";
    case Dimension::dimensionless: return "dimensionless";
    }
    return "?";
}

} // namespace

std::string internal_unit_name(Dimension dim) {
    switch (dim) {
    case Dimension::energy: return "eV";
    case Dimension::length: return "nm";
    case Dimension::time: return "fs";
    case Dimension::dipole: return "Debye";
    case Dimension::frequency: return "rad/fs";
    case Dimension::angle: return "rad";
    case Dimension::dimensionless: return "";
    }
    return "?";
}

double parse_quantity(const std::string& text, Dimension dim) {
    const char* begin = text.c_str();
    char* num_end = nullptr;
    const double value = std::strtod(begin, &num_end);
    if (num_end == begin)
        throw std::invalid_argument("quantity '" + text + "': no numeric value");
    if (!std::isfinite(value))
        throw std::invalid_argument("quantity '" + text + "': not finite");

    std::string unit(num_end);
    // trim surrounding whitespace
    while (!unit.empty() && std::isspace(static_cast<unsigned char>(unit.front())))
        unit.erase(unit.begin());
    while (!unit.empty() && std::isspace(static_cast<unsigned char>(unit.back())))
        unit.pop_back();

    if (dim == Dimension::dimensionless) {
        if (!unit.empty())
            throw std::invalid_argument("quantity '" + text +
                                        "': expected a dimensionless value, got unit '" +
                                        unit + "'");
        return value;
    }
    if (unit.empty())
        throw std::invalid_argument("quantity '" + text + "': missing unit; expected a " +
                                    dimension_name(dim) + " unit such as '" +
                                    internal_unit_name(dim) + "'");
    const auto& table = unit_table(dim);
    const auto it = table.find(unit);
    if (it == table.end())
        throw std::invalid_argument("quantity '" + text + "': unknown " +
                                    dimension_name(dim) + " unit '" + unit + "'");
    return value * it->second;
}

} // namespace feberi::physical
