"""Static figure of a run's norms, saved next to the CSV."""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt


def plot_records(frame, path, title: str = "Damped Euler diagnostics"):
    """
    Plot the decaying norms (log scale), the density range and the BKM integral.

    Parameters:
    frame (pd.DataFrame): records in CSV column order.
    path (str): output PNG path.
    """
    fig, (ax1, ax2, ax3) = plt.subplots(3, 1, figsize=(10, 10), sharex=True,
                                        gridspec_kw={"height_ratios": [3, 1, 1]})
    norms = [c for c in frame.columns if c.startswith(("l2_", "besov_u_", "besov_gradPi_"))]
    for column in norms:
        values = frame[column].where(frame[column] > 0)
        ax1.plot(frame["t"], values, label=column)
    ax1.set_yscale("log")
    ax1.legend(loc="upper right")
    ax1.set_ylabel("norm")

    ax2.plot(frame["t"], frame["rho_min"], label="rho_min", color="tab:blue")
    ax2.plot(frame["t"], frame["rho_max"], label="rho_max", color="tab:red")
    ax2.legend(loc="upper right")

    ax3.plot(frame["t"], frame["bkm_running"], label="int ||grad u||_inf", color="purple")
    ax3.set_xlabel("t")
    ax3.legend(loc="upper left")

    ax1.set_title(title, fontsize=14)
    plt.tight_layout()
    fig.savefig(path, bbox_inches="tight", dpi=120)
    plt.close(fig)
    return path
