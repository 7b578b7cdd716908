#include "geotomo/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace geotomo {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw std::runtime_error(path + ": " + what);
}

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) fail(path, "cannot open for writing");
    return out;
}

std::ifstream open_in(const std::string& path, bool binary = false) {
    std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
    if (!in) fail(path, "cannot open");
    return in;
}

}  // namespace

void write_pgm(const std::string& path, const ImageGrid& img, bool ascii) {
    double vmax = 0.0;
    for (double v : img.pixels) vmax = std::max(vmax, v);
    double scale = vmax > 0.0 ? 255.0 / vmax : 0.0;

    std::ofstream out = open_out(path, !ascii);
    out << (ascii ? "P2" : "P5") << "\n" << img.size << " " << img.size << "\n255\n";
    for (int r = 0; r < img.size; ++r)
        for (int c = 0; c < img.size; ++c) {
            double v = std::clamp(img.at(r, c) * scale, 0.0, 255.0);
            int g = static_cast<int>(std::lround(v));
            if (ascii)
                out << g << (c + 1 == img.size ? "\n" : " ");
            else
                out.put(static_cast<char>(g));
        }
}

ImageGrid read_pgm(const std::string& path) {
    std::ifstream in = open_in(path, true);
    std::string magic;
    in >> magic;
    if (magic != "P2" && magic != "P5") fail(path, "not a P2/P5 PGM");
    auto next_token = [&]() {
        std::string tok;
        while (in >> tok) {
            if (tok[0] == '#') {
                std::string rest;
                std::getline(in, rest);
                continue;
            }
            return tok;
        }
        fail(path, "truncated header");
    };
    int w = std::stoi(next_token());
    int h = std::stoi(next_token());
    int maxval = std::stoi(next_token());
    if (w != h) fail(path, "image is not square");
    ImageGrid img(w);
    if (magic == "P2") {
        for (double& v : img.pixels) {
            int g;
            if (!(in >> g)) fail(path, "truncated data");
            v = g;
        }
    } else {
        in.get();  // single whitespace after maxval
        if (maxval > 255) fail(path, "16-bit PGM not supported");
        std::vector<char> buf(img.pixels.size());
        in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (in.gcount() != static_cast<std::streamsize>(buf.size())) fail(path, "truncated data");
        for (size_t i = 0; i < buf.size(); ++i)
            img.pixels[i] = static_cast<unsigned char>(buf[i]);
    }
    return img;
}

PixelSet read_pgm_mask(const std::string& path) {
    ImageGrid img = read_pgm(path);
    double vmax = 0.0;
    for (double v : img.pixels) vmax = std::max(vmax, v);
    PixelSet set(img.size);
    for (size_t i = 0; i < img.pixels.size(); ++i)
        if (img.pixels[i] > 0.5 * vmax) set.mask[i] = 1;
    return set;
}

void write_sinogram_csv(const std::string& path, const Sinogram& sino) {
    std::ofstream out = open_out(path);
    out << "angle_deg";
    for (int j = 0; j < sino.detector_count; ++j) out << ",d" << j;
    out << "\n";
    out.precision(17);
    for (size_t a = 0; a < sino.values.size(); ++a) {
        out << sino.schedule.angles[a];
        for (double v : sino.values[a]) out << "," << v;
        out << "\n";
    }
}

Sinogram read_sinogram_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) fail(path, "empty file");
    int bins = static_cast<int>(std::count(line.begin(), line.end(), ','));
    if (bins <= 0) fail(path, "bad header");

    Sinogram sino;
    sino.detector_count = bins;
    std::vector<double> angles;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> row;
        while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
        if (static_cast<int>(row.size()) != bins + 1) fail(path, "ragged row");
        angles.push_back(row[0]);
        sino.values.emplace_back(row.begin() + 1, row.end());
    }
    sino.schedule = TiltSchedule(angles);
    return sino;
}

void write_polygon_csv(const std::string& path, const ConvexPolygon& poly) {
    std::ofstream out = open_out(path);
    out << "x,y\n";
    out.precision(17);
    for (Vec2 v : poly.vertices) out << v.x << "," << v.y << "\n";
}

ConvexPolygon read_polygon_csv(const std::string& path) {
    std::ifstream in = open_in(path);
    std::string line;
    ConvexPolygon poly;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'x') continue;
        std::stringstream ss(line);
        std::string sx, sy;
        std::getline(ss, sx, ',');
        std::getline(ss, sy, ',');
        poly.vertices.push_back({std::stod(sx), std::stod(sy)});
    }
    return poly;
}

void write_pixelset_csv(const std::string& path, const PixelSet& set) {
    std::ofstream out = open_out(path);
    out << "row,col\n";
    for (auto [r, c] : set.members()) out << r << "," << c << "\n";
}

PixelSet read_pixelset_csv(const std::string& path, int size) {
    std::ifstream in = open_in(path);
    PixelSet set(size);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == 'r') continue;
        std::stringstream ss(line);
        std::string sr, sc;
        std::getline(ss, sr, ',');
        std::getline(ss, sc, ',');
        set.add(std::stoi(sr), std::stoi(sc));
    }
    return set;
}

}  // namespace geotomo
