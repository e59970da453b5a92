#include "nrp/render.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace nrp {

Rgb parse_color(const std::string& s)
{
    if (s.size() != 7 || s[0] != '#')
        throw std::invalid_argument("colour must be #rrggbb, got '" + s + "'");
    auto hex = [&](std::size_t i) {
        unsigned v = 0;
        for (std::size_t k = i; k < i + 2; ++k) {
            char ch = s[k];
            v *= 16;
            if (ch >= '0' && ch <= '9')
                v += ch - '0';
            else if (ch >= 'a' && ch <= 'f')
                v += ch - 'a' + 10;
            else if (ch >= 'A' && ch <= 'F')
                v += ch - 'A' + 10;
            else
                throw std::invalid_argument("colour must be #rrggbb, got '" + s + "'");
        }
        return static_cast<std::uint8_t>(v);
    };
    return {hex(1), hex(3), hex(5)};
}

std::string to_hex(Rgb c)
{
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

void set_style(RenderStyle& s, const std::string& key, const std::string& color)
{
    Rgb* slot = key == "interior"        ? &s.interior
                : key == "exterior_near" ? &s.exterior_near
                : key == "exterior_far"  ? &s.exterior_far
                : key == "ray"           ? &s.ray
                : key == "point"         ? &s.point
                                         : nullptr;
    if (!slot)
        throw std::invalid_argument("unknown raster style key '" + key + "'");
    *slot = parse_color(color);
}

void set_style(ChordStyle& s, const std::string& key, const std::string& value)
{
    if (key == "stroke") {
        double w = 0;
        try {
            w = std::stod(value);
        } catch (const std::exception&) {
        }
        if (!(w > 0))
            throw std::invalid_argument("stroke must be a positive width, got '" + value + "'");
        s.stroke = w;
        return;
    }
    Rgb* slot = key == "characteristic"  ? &s.characteristic
                : key == "critical"      ? &s.critical
                : key == "forward_image" ? &s.forward_image
                : key == "generic"       ? &s.generic
                                         : nullptr;
    if (!slot)
        throw std::invalid_argument("unknown chord style key '" + key + "'");
    *slot = parse_color(value);
}

void Viewport::validate() const
{
    if (!(width > 0) || !std::isfinite(width))
        throw std::invalid_argument("viewport width must be positive");
    if (pixels_x < 1 || pixels_y < 1)
        throw std::invalid_argument("resolution must be positive");
}

Complex Viewport::to_plane(int x, int y) const
{
    double h = pixel_size();
    return {center.real() + (x + 0.5 - pixels_x / 2.0) * h, center.imag() - (y + 0.5 - pixels_y / 2.0) * h};
}

std::optional<std::pair<int, int>> Viewport::to_pixel(Complex z) const
{
    double h = pixel_size();
    double fx = (z.real() - center.real()) / h + pixels_x / 2.0;
    double fy = -(z.imag() - center.imag()) / h + pixels_y / 2.0;
    if (!(fx >= 0 && fx < pixels_x && fy >= 0 && fy < pixels_y))
        return std::nullopt;
    return std::pair{static_cast<int>(fx), static_cast<int>(fy)};
}

int escape_time(Complex z0, Complex c, int max_iter)
{
    Complex z = z0;
    for (int k = 1; k <= max_iter; ++k) {
        z = z * z + c;
        if (std::norm(z) > kEscapeRadius * kEscapeRadius)
            return k;
    }
    return -1;
}

namespace {

Rgb blend(Rgb a, Rgb b, double t)
{
    auto mix = [t](std::uint8_t x, std::uint8_t y) {
        return static_cast<std::uint8_t>(std::lround(x + (y - x) * t));
    };
    return {mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
}

Rgb shade(int escape, int max_iter, const RenderStyle& s)
{
    if (escape < 0)
        return s.interior;
    double t = std::sqrt(static_cast<double>(escape) / max_iter);
    return blend(s.exterior_far, s.exterior_near, std::min(1.0, t));
}

void plot(Raster& img, int x, int y, Rgb c)
{
    if (x >= 0 && x < img.width && y >= 0 && y < img.height)
        img.pixels[static_cast<std::size_t>(y) * img.width + x] = c;
}

// Bresenham; points outside the image are clipped pixel by pixel.
void draw_segment(Raster& img, const Viewport& v, Complex a, Complex b, Rgb c)
{
    double h = v.pixel_size();
    auto fx = [&](Complex z) { return std::floor((z.real() - v.center.real()) / h + v.pixels_x / 2.0); };
    auto fy = [&](Complex z) { return std::floor(-(z.imag() - v.center.imag()) / h + v.pixels_y / 2.0); };
    double ax = fx(a), ay = fy(a), bx = fx(b), by = fy(b);
    const double lim = 4.0 * std::max(v.pixels_x, v.pixels_y);
    if (std::abs(ax) > lim || std::abs(ay) > lim || std::abs(bx) > lim || std::abs(by) > lim)
        return;  // far outside; the segment is clipped entirely
    int x0 = static_cast<int>(ax), y0 = static_cast<int>(ay);
    int x1 = static_cast<int>(bx), y1 = static_cast<int>(by);
    int dx = std::abs(x1 - x0), dy = -std::abs(y1 - y0);
    int sx = x0 < x1 ? 1 : -1, sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        plot(img, x0, y0, c);
        if (x0 == x1 && y0 == y1)
            break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

}  // namespace

Raster render_plane(const RenderSpec& spec)
{
    spec.view.validate();
    if (spec.max_iter < 1)
        throw std::invalid_argument("max_iter must be positive");
    Raster img;
    img.width = spec.view.pixels_x;
    img.height = spec.view.pixels_y;
    const std::size_t total = static_cast<std::size_t>(img.width) * img.height;
    img.escape.assign(total, -1);
    img.pixels.assign(total, spec.style.interior);

    auto row = [&](int y) {
        for (int x = 0; x < img.width; ++x) {
            Complex p = spec.view.to_plane(x, y);
            int e = spec.plane == PlaneKind::parameter ? escape_time(Complex(0, 0), p, spec.max_iter)
                                                       : escape_time(p, spec.c.value(), spec.max_iter);
            std::size_t i = static_cast<std::size_t>(y) * img.width + x;
            img.escape[i] = e;
            img.pixels[i] = shade(e, spec.max_iter, spec.style);
        }
    };
    unsigned workers = spec.threads ? spec.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(img.height));
    if (workers <= 1) {
        for (int y = 0; y < img.height; ++y)
            row(y);
    } else {
        std::atomic<int> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int y = next++; y < img.height; y = next++)
                    row(y);
            });
        for (auto& t : pool)
            t.join();
    }

    for (const auto& ray : spec.rays)
        for (std::size_t i = 1; i < ray.size(); ++i)
            draw_segment(img, spec.view, ray[i - 1], ray[i], spec.style.ray);
    for (Complex z : spec.points) {
        auto px = spec.view.to_pixel(z);
        if (!px)
            continue;
        for (int dy = -2; dy <= 2; ++dy)
            for (int dx = -2; dx <= 2; ++dx)
                if (dx * dx + dy * dy <= 4)
                    plot(img, px->first + dx, px->second + dy, spec.style.point);
    }
    return img;
}

void write_ppm(std::ostream& os, const Raster& img)
{
    os << "P6\n" << img.width << ' ' << img.height << "\n255\n";
    for (const Rgb& p : img.pixels) {
        char px[3] = {static_cast<char>(p.r), static_cast<char>(p.g), static_cast<char>(p.b)};
        os.write(px, 3);
    }
}

namespace {

std::string num(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    std::string s = buf;
    return s == "-0.000" ? "0.000" : s;
}

Rgb role_color(ClassRole r, const ChordStyle& s)
{
    switch (r) {
    case ClassRole::characteristic:
        return s.characteristic;
    case ClassRole::critical:
        return s.critical;
    case ClassRole::forward_image:
        return s.forward_image;
    case ClassRole::generic:
        return s.generic;
    }
    return s.generic;
}

}  // namespace

std::string render_chords(const ChordDiagram& d)
{
    const ChordStyle& st = d.style;
    if (st.size < 16)
        throw std::invalid_argument("chord diagram size must be at least 16");
    const double half = st.size / 2.0;
    const double radius = half * 0.9;
    auto place = [&](const Angle& t) {
        double a = 2 * std::numbers::pi * t.approx();
        return std::pair{half + radius * std::cos(a), half - radius * std::sin(a)};
    };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(st.size) + "\" height=\"" +
           std::to_string(st.size) + "\" viewBox=\"0 0 " + std::to_string(st.size) + " " + std::to_string(st.size) +
           "\">\n";
    out += "  <circle cx=\"" + num(half) + "\" cy=\"" + num(half) + "\" r=\"" + num(radius) +
           "\" fill=\"none\" stroke=\"#000000\" stroke-width=\"1.000\"/>\n";
    for (const auto& cls : d.classes) {
        std::string color = to_hex(role_color(cls.role, st));
        out += "  <g class=\"" + to_string(cls.role) + "\">\n";
        std::vector<std::pair<double, double>> pts;
        for (const auto& cl : cls.clusters)
            pts.push_back(place(cl.representative()));
        if (pts.size() == 1) {
            out += "    <circle cx=\"" + num(pts[0].first) + "\" cy=\"" + num(pts[0].second) + "\" r=\"3.000\" fill=\"" +
                   color + "\"/>\n";
        } else if (pts.size() == 2) {
            out += "    <line x1=\"" + num(pts[0].first) + "\" y1=\"" + num(pts[0].second) + "\" x2=\"" +
                   num(pts[1].first) + "\" y2=\"" + num(pts[1].second) + "\" stroke=\"" + color +
                   "\" stroke-width=\"" + num(st.stroke) + "\"/>\n";
        } else if (pts.size() > 2) {
            // clusters are sorted by angle, so this is the hull boundary in order
            std::string poly;
            for (const auto& [x, y] : pts)
                poly += (poly.empty() ? "" : " ") + num(x) + "," + num(y);
            out += "    <polygon points=\"" + poly + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"" +
                   num(st.stroke) + "\"/>\n";
        }
        out += "  </g>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace nrp
