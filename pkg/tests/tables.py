"""Published baseline means, optimized means and printed saving percentages."""

# (baseline, {method: mean}, {method: printed percent}) per topology and scenario;
# the scenario I grid/random figure is the one known misprint and is left out
PRINTED = {
    ("ER", "I"): (23.29, {"spectral": 15.90, "degree": 15.76, "betweenness": 16.83, "random": 20.10},
                  {"spectral": 0.78, "degree": -32, "betweenness": 6.7, "random": 27.5}),
    ("SW", "I"): (23.33, {"spectral": 18.89, "degree": 17.28, "betweenness": 18.32, "random": 20.37},
                  {"spectral": 9.3, "degree": -25.9, "betweenness": 6, "random": 17.8}),
    ("Galaxy", "I"): (23.32, {"spectral": 9.28, "degree": 3.81, "betweenness": 5.00, "random": 18.88},
                      {"spectral": 143, "degree": -83, "betweenness": 31, "random": 395}),
    ("Grid", "I"): (23.35, {"spectral": 17.38, "degree": 18.75, "betweenness": 20.07, "random": 19.52},
                    {"spectral": -25.5, "degree": 7.8, "betweenness": 15}),
    ("Cluster", "I"): (23.34, {"spectral": 15.27, "degree": 16.38, "betweenness": 16.21, "random": 19.90},
                       {"spectral": -34.5, "degree": 7, "betweenness": 6.15, "random": 30}),
    ("ER", "II"): (26.68, {"spectral": 17.33, "degree": 17.24, "betweenness": 18.54, "random": 22.19},
                   {"spectral": 0.5, "degree": -35.4, "betweenness": 7.5, "random": 28.7}),
    ("SW", "II"): (26.64, {"spectral": 20.75, "degree": 18.68, "betweenness": 20.12, "random": 22.39},
                   {"spectral": 11, "degree": -29, "betweenness": 7, "random": 19}),
    ("Galaxy", "II"): (25.70, {"spectral": 10.00, "degree": 3.83, "betweenness": 5.22, "random": 20.98},
                       {"spectral": 161, "degree": -85, "betweenness": 36, "random": 447}),
    ("Grid", "II"): (25.77, {"spectral": 19.14, "degree": 20.75, "betweenness": 22.44, "random": 21.16},
                     {"spectral": -25, "degree": 8.5, "betweenness": 17, "random": 11.5}),
    ("Cluster", "II"): (25.75, {"spectral": 17.56, "degree": 18.92, "betweenness": 18.51, "random": 22.36},
                        {"spectral": -31.8, "degree": 7.75, "betweenness": 5.4, "random": 27}),
}
